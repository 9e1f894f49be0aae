#include "gplp/cli/run.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gplp/errors.hpp"
#include "gplp/oracle/enumerate.hpp"
#include "gplp/oracle/sampling.hpp"

namespace gplp {

namespace {

using Json = nlohmann::ordered_json;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json form_json(const LinearForm& form) {
  Json coeffs = Json::object();
  for (const auto& [v, a] : form.coeffs()) coeffs[v] = round12(a);
  Json out = Json::object();
  out["coeffs"] = std::move(coeffs);
  out["const"] = round12(form.constant());
  return out;
}

Json value_json(const DeltaValue& v) {
  if (auto* d = std::get_if<double>(&v)) return round12(*d);
  return std::get<std::string>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Phase::Cli, "cannot read program file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw Error(Phase::Cli, "bad " + what + " '" + s + "' in grid");
  return v;
}

// The answer is a table when every term is a plain weighted delta
// combination.
bool is_discrete_table(const SuccessFunction& psi) {
  if (psi.is_zero()) return false;
  for (const auto& t : psi.terms())
    if (!t.ppdf.gaussians.empty() || !t.constraints.empty() ||
        t.ppdf.deltas.empty())
      return false;
  return true;
}

std::vector<Assignment> table_rows(const SuccessFunction& psi) {
  std::vector<Assignment> rows;
  std::set<std::string> seen;
  for (const auto& t : psi.terms()) {
    std::string key;
    for (const auto& [v, x] : t.ppdf.deltas) key += v + "=" + to_string(x) + ";";
    if (seen.insert(key).second) rows.push_back(t.ppdf.deltas);
  }
  return rows;
}

bool program_is_discrete(const Program& program) {
  for (const auto& s : program.switches())
    if (std::holds_alternative<Gaussian>(s.dist)) return false;
  for (const auto& c : program.clauses())
    for (const auto& item : c.body)
      if (std::holds_alternative<ConstraintItem>(item)) return false;
  return true;
}

// Returns true when the check passed.
bool run_check(const Program& program, const Query& query,
               const QueryResult& result, const RunConfig& config,
               std::ostream& err) {
  const auto& psi = result.success_function;
  if (program_is_discrete(program)) {
    auto answers = enumerate_discrete(program, query);
    double total = 0.0;
    for (const auto& a : answers) total += a.probability;
    double worst = 0.0;
    std::set<Assignment> covered;
    for (const auto& a : answers) {
      double expect = a.probability;
      if (config.normalize) expect = total > 0.0 ? expect / total : 0.0;
      worst = std::max(worst, std::abs(evaluate(psi, a.values) - expect));
      covered.insert(a.values);
    }
    for (const auto& row : table_rows(psi))
      if (!covered.count(row))
        worst = std::max(worst, std::abs(evaluate(psi, row)));
    bool ok = worst <= 1e-12;
    err << "check: enumeration over " << answers.size()
        << " answers, max deviation " << format_real(worst)
        << (ok ? " (pass)" : " (FAIL)") << '\n';
    return ok;
  }
  if (!config.grid) {
    err << "check: skipped, continuous answers need --grid\n";
    return true;
  }
  for (const auto& t : psi.terms())
    if (!t.ppdf.deltas.empty()) {
      err << "check: skipped, answer has point masses\n";
      return true;
    }
  const auto& grid = *config.grid;
  auto xs = grid.points();
  auto exact = grid_values(psi, grid);
  SamplingOptions opts;
  opts.seed = config.seed;
  opts.normalized = config.normalize;
  auto mc = mc_density(program, query, grid.var, xs, opts);
  double peak = 0.0;
  for (double y : exact) peak = std::max(peak, y);
  // Tail points see almost no samples, so their standard error is floored.
  double se_floor = std::max(1e-3 * peak, 1e-12);
  double worst = 0.0;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dev = std::abs(exact[i] - mc[i].mean);
    worst = std::max(worst, dev);
    worst_z = std::max(worst_z, dev / std::max(mc[i].std_error, se_floor));
  }
  // Kernel smoothing biases the estimate slightly, hence the margin over
  // three standard errors.
  bool ok = worst_z <= 4.0;
  err << "check: monte carlo with " << opts.n << " samples, max deviation "
      << format_real(worst) << ", max z " << format_real(worst_z)
      << (ok ? " (pass)" : " (FAIL)") << '\n';
  return ok;
}

void write_csv(std::ostream& out, const GridSpec& grid,
               const std::vector<double>& ys) {
  auto xs = grid.points();
  out << "value,density\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << format_real(xs[i]) << ',' << format_real(ys[i]) << '\n';
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> xs;
  xs.reserve(steps);
  for (int i = 0; i < steps; ++i)
    xs.push_back(i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1));
  return xs;
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 4)
    throw Error(Phase::Cli, "grid must be VAR:LO:HI:STEPS, got '" + text + "'");
  GridSpec g;
  g.var = parts[0];
  if (g.var.empty() ||
      !(std::isupper(static_cast<unsigned char>(g.var[0])) || g.var[0] == '_'))
    throw Error(Phase::Cli, "grid variable '" + g.var + "' is not a variable");
  g.lo = parse_double(parts[1], "lower bound");
  g.hi = parse_double(parts[2], "upper bound");
  double steps = parse_double(parts[3], "step count");
  if (steps != std::floor(steps) || steps < 2 || steps > 1e7)
    throw Error(Phase::Cli, "grid step count must be an integer >= 2");
  g.steps = static_cast<int>(steps);
  if (!(g.hi > g.lo)) throw Error(Phase::Cli, "grid upper bound must exceed lower bound");
  return g;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  throw Error(Phase::Cli, "unknown format '" + text + "'");
}

std::vector<double> grid_values(const SuccessFunction& psi,
                                const GridSpec& grid) {
  for (const auto& v : psi.variables())
    if (v != grid.var)
      throw Error(Phase::Cli, "answer still mentions " + v +
                                  "; the grid covers only " + grid.var);
  std::vector<double> ys;
  for (double x : grid.points()) ys.push_back(evaluate(psi, {{grid.var, x}}));
  return ys;
}

std::string emit_json(const QueryResult& result,
                      const std::optional<GridSpec>& grid) {
  Json terms = Json::array();
  for (const auto& t : result.success_function.terms()) {
    Json term = Json::object();
    term["coeff"] = round12(t.ppdf.coeff);
    Json deltas = Json::array();
    for (const auto& [v, x] : t.ppdf.deltas) {
      Json d = Json::object();
      d["var"] = v;
      d["value"] = value_json(x);
      deltas.push_back(std::move(d));
    }
    term["deltas"] = std::move(deltas);
    Json gaussians = Json::array();
    for (const auto& g : t.ppdf.gaussians) {
      Json j = Json::object();
      j["arg"] = form_json(g.arg);
      j["mean"] = round12(g.mean);
      j["variance"] = round12(g.variance);
      gaussians.push_back(std::move(j));
    }
    term["gaussians"] = std::move(gaussians);
    Json rows = Json::array();
    for (const auto& r : t.constraints.rows()) rows.push_back(form_json(r));
    term["constraints"] = std::move(rows);
    terms.push_back(std::move(term));
  }
  Json out = Json::object();
  out["terms"] = std::move(terms);
  Json meta = Json::object();
  meta["derivations"] = result.derivation_count;
  meta["depth"] = result.depth_reached;
  out["meta"] = std::move(meta);
  if (grid) {
    auto xs = grid->points();
    auto ys = grid_values(result.success_function, *grid);
    Json rows = Json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Json r = Json::object();
      r["value"] = round12(xs[i]);
      r["density"] = round12(ys[i]);
      rows.push_back(std::move(r));
    }
    out["grid"] = std::move(rows);
  }
  return out.dump();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.depth_limit < 1)
      throw Error(Phase::Cli, "depth limit must be at least 1");
    if (config.format == OutputFormat::Csv && !config.grid)
      throw Error(Phase::Cli, "csv output needs --grid");
    Program program = parse_program(read_file(config.program_path));
    std::string text = config.query;
    auto last = text.find_last_not_of(" \t\r\n");
    if (last == std::string::npos) throw Error(Phase::Cli, "empty query");
    text.erase(last + 1);
    if (text.back() != '.') text += '.';
    Query query = parse_query(text);

    QueryOptions qopts;
    qopts.normalize = config.normalize;
    qopts.depth_limit = config.depth_limit;
    QueryResult result = answer_query(program, query, qopts);
    for (const auto& d : result.diagnostics) err << "[derive] warning: " << d << '\n';
    const auto& psi = result.success_function;

    std::vector<double> ys;
    if (config.grid && !psi.is_zero()) ys = grid_values(psi, *config.grid);

    switch (config.format) {
      case OutputFormat::Json:
        out << emit_json(result, psi.is_zero() ? std::nullopt : config.grid)
            << '\n';
        break;
      case OutputFormat::Csv:
        if (psi.is_zero())
          out << "value,density\n";
        else
          write_csv(out, *config.grid, ys);
        break;
      case OutputFormat::Text:
        out << to_string(psi) << '\n';
        if (is_discrete_table(psi)) {
          out << '\n';
          auto rows = table_rows(psi);
          for (const auto& [v, x] : rows.front()) {
            (void)x;
            out << v << '\t';
          }
          out << "probability\n";
          for (const auto& row : rows) {
            for (const auto& [v, x] : row) {
              (void)v;
              out << to_string(x) << '\t';
            }
            out << format_real(evaluate(psi, row)) << '\n';
          }
        }
        if (config.grid && !psi.is_zero()) {
          out << '\n';
          write_csv(out, *config.grid, ys);
        }
        break;
    }

    if (psi.is_zero()) {
      err << "query failed: success function is zero\n";
      return exit_code::kZero;
    }
    if (config.check && !run_check(program, query, result, config, err))
      return exit_code::kCheckFailed;
    return exit_code::kOk;
  } catch (const Error& e) {
    err << '[' << phase_name(e.phase()) << "] " << e.what() << '\n';
    return exit_code::kProgramError;
  }
}

}  // namespace gplp
