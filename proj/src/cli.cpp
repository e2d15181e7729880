#include "bundlecurv/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bundlecurv/bundle.hpp"
#include "bundlecurv/classify.hpp"
#include "bundlecurv/error.hpp"
#include "bundlecurv/oracle.hpp"
#include "bundlecurv/profile.hpp"
#include "bundlecurv/surface.hpp"

namespace bundlecurv::cli {
namespace {

using Json = nlohmann::ordered_json;
using Params = std::map<std::string, std::string>;

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> keys;
  bool csv = false;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"profile", "integrate 2H'' + H^3 + alpha H = 0 and write (r, H, H')",
       {"alpha", "a", "r-max", "step", "tolerance"}, true},
      {"flatness", "conformal-flatness residuals of the example built from a profile CSV",
       {"profile", "c", "alpha", "samples"}},
      {"example", "chart components of the example circle-bundle metric",
       {"alpha", "a", "c", "r-max", "step"}},
      {"cotton", "finite-difference Cotton tensor sweep",
       {"metric", "fd-step", "grid", "alpha", "a", "c", "r-max", "step", "degree",
        "amplitude"}},
      {"classify", "constant-curvature catalog entry for (genus, degree)", {"genus", "degree"}},
      {"nonexistence", "elimination trace and grid scan for the compact sphere case",
       {"box", "grid"}},
      {"holonomy", "flat-connection holonomy character", {"genus", "coeffs"}},
  };
  return all;
}

const Command& command_for(const std::string& name) {
  for (const auto& s : commands()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorKind::Parameter, "unknown subcommand '" + name + "'");
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool has(const Params& p, const std::string& key) { return p.count(key) > 0; }

double number(const Params& p, const std::string& key, std::optional<double> fallback = {}) {
  const auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::Parameter, "missing --" + key);
  }
  const std::string& s = it->second;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parameter, "--" + key + " expects a number, got '" + s + "'");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::Parameter, "--" + key + " must be finite");
  }
  return v;
}

long long integer(const Params& p, const std::string& key,
                  std::optional<long long> fallback = {}) {
  const auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::Parameter, "missing --" + key);
  }
  const std::string& s = it->second;
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parameter, "--" + key + " expects an integer, got '" + s + "'");
  }
  return v;
}

int bounded_int(const Params& p, const std::string& key, long long lo, long long hi,
                std::optional<long long> fallback = {}) {
  const long long v = integer(p, key, fallback);
  if (v < lo || v > hi) {
    throw Error(ErrorKind::Parameter, "--" + key + " must lie in [" + std::to_string(lo) +
                                          ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parameter, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json config_echo(const RunConfig& c) {
  Json echo = Json::object();
  echo["subcommand"] = c.subcommand;
  for (const auto& [k, v] : c.params) echo[k] = v;
  return echo;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<double> column(const std::vector<profile::Sample>& grid,
                           double profile::Sample::*field) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& s : grid) out.push_back(s.*field);
  return out;
}

profile::OdeParams ode_params(const Params& p, double r_max_default) {
  profile::OdeParams ode;
  ode.alpha = number(p, "alpha", 0.0);
  ode.initial_value = number(p, "a", 1.0);
  ode.r_max = number(p, "r-max", r_max_default);
  ode.step = number(p, "step", 1e-3);
  return ode;
}

// ---- profile -------------------------------------------------------------

std::string render_profile(const RunConfig& cfg, Format fmt) {
  const auto& p = cfg.params;
  profile::OdeParams ode;
  ode.alpha = number(p, "alpha");
  ode.initial_value = number(p, "a");
  ode.r_max = number(p, "r-max");
  ode.step = number(p, "step", 1e-3);
  profile::IntegrateOptions opt;
  opt.conservation_tolerance = number(p, "tolerance", opt.conservation_tolerance);
  if (!(opt.conservation_tolerance > 0.0)) {
    throw Error(ErrorKind::Parameter, "--tolerance must be positive");
  }
  const profile::Profile prof = profile::integrate(ode, opt);
  const auto residual = profile::pointwise_residual(prof);
  const auto& grid = prof.grid();

  if (fmt == Format::Json) {
    Json j;
    j["config"] = config_echo(cfg);
    j["conserved_constant"] = prof.conserved_constant();
    j["max_conservation_residual"] = profile::conservation_residual(prof);
    j["r"] = column(grid, &profile::Sample::r);
    j["H"] = column(grid, &profile::Sample::H);
    j["Hp"] = column(grid, &profile::Sample::Hp);
    j["conservation_residual"] = residual;
    return dump(j);
  }
  std::string out = "# bundlecurv profile alpha=" + shortest(ode.alpha) +
                    " a=" + shortest(ode.initial_value) + " r-max=" + shortest(ode.r_max) +
                    " step=" + shortest(ode.step) +
                    " tolerance=" + shortest(opt.conservation_tolerance) + "\n";
  out += "r,H,Hp,conservation_residual\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += g17(grid[i].r) + "," + g17(grid[i].H) + "," + g17(grid[i].Hp) + "," +
           g17(residual[i]) + "\n";
  }
  return out;
}

// Reads a CSV written by `profile`. Comment lines may carry key=value pairs.
struct ProfileFile {
  std::vector<profile::Sample> grid;
  Params header;
};

ProfileFile parse_profile_csv(const std::string& text, const std::string& path) {
  ProfileFile f;
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  std::size_t lineno = 0;
  const auto bad = [&](const std::string& why) {
    return Error(ErrorKind::MalformedProfile,
                 path + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream words(line.substr(1));
      std::string w;
      while (words >> w) {
        const auto eq = w.find('=');
        if (eq != std::string::npos) f.header[w.substr(0, eq)] = w.substr(eq + 1);
      }
      continue;
    }
    if (!seen_header) {
      if (line.rfind("r,H,Hp", 0) != 0) throw bad("expected header r,H,Hp[,...]");
      seen_header = true;
      continue;
    }
    std::array<double, 3> v{};
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 3; ++k) {
      const auto res = std::from_chars(cur, end, v[static_cast<std::size_t>(k)]);
      if (res.ec != std::errc()) throw bad("unparsable number");
      cur = res.ptr;
      if (k < 2) {
        if (cur == end || *cur != ',') throw bad("expected ','");
        ++cur;
      }
    }
    if (cur != end && *cur != ',') throw bad("trailing characters");
    f.grid.push_back({v[0], v[1], v[2]});
  }
  if (!seen_header || f.grid.empty()) {
    throw Error(ErrorKind::MalformedProfile, path + ": no samples");
  }
  return f;
}

std::string render_flatness(const RunConfig& cfg) {
  const auto& p = cfg.params;
  if (!has(p, "profile")) throw Error(ErrorKind::Parameter, "missing --profile");
  const std::string path = p.at("profile");
  ProfileFile file = parse_profile_csv(read_file(path), path);
  double alpha = 0.0;
  if (has(p, "alpha")) {
    alpha = number(p, "alpha");
  } else if (has(file.header, "alpha")) {
    alpha = number(file.header, "alpha");
  } else {
    throw Error(ErrorKind::Parameter, "profile has no alpha in its header; pass --alpha");
  }
  const double tolerance = number(file.header, "tolerance", 1e-8);
  const double c = number(p, "c");
  const int samples = bounded_int(p, "samples", 8, 1'000'000, 400);

  if (file.grid.size() < 2) throw Error(ErrorKind::MalformedProfile, "profile too short");
  profile::OdeParams ode;
  ode.alpha = alpha;
  ode.initial_value = file.grid.front().H;
  ode.r_max = file.grid.back().r;
  ode.step = file.grid[1].r - file.grid[0].r;
  auto prof = std::make_shared<const profile::Profile>(ode, std::move(file.grid), tolerance);
  const auto m = bundle::build_example(prof, c);
  const auto fr = surface::flatness_residual(m.base(), m.curvature(), samples);
  const auto dr = surface::dnabla_s_frame_residual(m.base(), m.curvature(), samples);

  Json j;
  j["config"] = config_echo(cfg);
  j["alpha_estimate"] = fr.alpha_estimate;
  j["hess_residual"] = fr.hess_residual;
  j["constraint_residual"] = fr.constraint_residual;
  j["trace_residual"] = fr.trace_residual;
  j["dnabla_s"] = dr.sup_norms;
  j["window"] = {fr.window.lo, fr.window.hi};
  j["curvature_function_residual"] = bundle::curvature_function_check(m);
  j["grid"] = fr.grid;
  return dump(j);
}

// ---- example -------------------------------------------------------------

std::shared_ptr<const profile::Profile> example_profile(const Params& p) {
  return std::make_shared<const profile::Profile>(profile::integrate(ode_params(p, 12.0)));
}

std::string render_example(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const double c = number(p, "c", 1.0);
  const auto m = bundle::build_example(example_profile(p), c);
  const auto& tower = m.warp().samples;
  std::vector<double> r, gpp, gpt, H, l;
  for (std::size_t i = 0; i < tower.size(); ++i) {
    const double ri = tower.node_r(i);
    const auto g = m.components(ri);
    r.push_back(ri);
    gpp.push_back(g[1][1]);
    gpt.push_back(g[1][2]);
    H.push_back(m.profile().grid()[m.warp().window.first + i].H);
    l.push_back(tower.lower().nodes()[i].value);
  }
  Json j;
  j["config"] = config_echo(cfg);
  j["c"] = c;
  j["window"] = {m.window().lo, m.window().hi};
  j["r"] = r;
  j["g_phiphi"] = gpp;
  j["g_phit"] = gpt;
  j["H"] = H;
  j["l"] = l;
  return dump(j);
}

// ---- cotton --------------------------------------------------------------

std::string render_cotton(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const std::string kind = has(p, "metric") ? p.at("metric") : "example";
  const double fd = number(p, "fd-step", 5e-3);
  if (!(fd > 0.0)) throw Error(ErrorKind::Parameter, "--fd-step must be positive");
  const int grid = bounded_int(p, "grid", 1, 64, 8);

  const auto chart = [&]() -> oracle::ChartMetric {
    if (kind == "flat") {
      return oracle::euclidean({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}, fd);
    }
    if (kind == "lens") {
      return bundle::lens_chart(bounded_int(p, "degree", -1000, 1000, 2), fd).metric;
    }
    if (kind == "example" || kind == "perturbed") {
      const auto m = bundle::build_example(example_profile(p), number(p, "c", 1.0));
      auto metric = bundle::example_chart(m, fd).metric;
      if (kind == "perturbed") metric = bundle::perturb_phiphi(metric, number(p, "amplitude", 0.1));
      return metric;
    }
    throw Error(ErrorKind::Parameter,
                "--metric must be one of example, lens, flat, perturbed; got '" + kind + "'");
  }();

  const auto report = oracle::cotton_residual(chart, grid);
  Json samples = Json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"point", s.point}, {"component_max", s.component_max}});
  }
  Json j;
  j["config"] = config_echo(cfg);
  j["metric"] = kind;
  j["fd_step"] = report.fd_step;
  j["sup_norm"] = report.sup_norm;
  j["samples"] = std::move(samples);
  return dump(j);
}

// ---- classify ------------------------------------------------------------

std::string rational_str(const classify::Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

double rational_value(const classify::Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

std::string render_classify(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const auto rec = classify::catalog(bounded_int(p, "genus", 0, 1'000'000),
                                     bounded_int(p, "degree", -1'000'000, 1'000'000));
  Json j;
  j["config"] = config_echo(cfg);
  j["genus"] = rec.genus;
  j["degree"] = rec.degree;
  j["H"] = rational_value(rec.H);
  j["H_exact"] = rational_str(rec.H);
  j["K"] = rational_value(rec.K);
  j["K_exact"] = rational_str(rec.K);
  j["space_kind"] = rec.space_label();
  if (rec.space_curvature) {
    j["space_curvature"] = rational_value(*rec.space_curvature);
    j["space_curvature_exact"] = rational_str(*rec.space_curvature);
  } else {
    j["space_curvature"] = nullptr;
    j["space_curvature_exact"] = nullptr;
  }
  j["moduli_dim"] = rec.moduli_dim;
  return dump(j);
}

// ---- nonexistence ----------------------------------------------------------

classify::ParameterBox parse_box(const std::string& arg) {
  const std::string text = (!arg.empty() && arg.front() == '{') ? arg : read_file(arg);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parameter, std::string("box is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Parameter, "box must be a JSON object");
  classify::ParameterBox box;
  for (const auto& [key, value] : j.items()) {
    classify::Range* range = nullptr;
    if (key == "A") range = &box.A;
    else if (key == "B") range = &box.B;
    else if (key == "alpha") range = &box.alpha;
    else if (key == "c") range = &box.c;
    else if (key == "min_gap") {
      if (!value.is_number()) throw Error(ErrorKind::Parameter, "box.min_gap must be a number");
      box.min_gap = value.get<double>();
      continue;
    } else {
      throw Error(ErrorKind::Parameter, "unknown box key '" + key + "'");
    }
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
        !value[1].is_number()) {
      throw Error(ErrorKind::Parameter, "box." + key + " must be [lo, hi]");
    }
    *range = {value[0].get<double>(), value[1].get<double>()};
  }
  return box;
}

Json range_json(const classify::Range& r) { return Json::array({r.lo, r.hi}); }

std::string render_nonexistence(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const auto box = has(p, "box") ? parse_box(p.at("box")) : classify::ParameterBox{};
  const int n = bounded_int(p, "grid", 1, 400, 50);
  const auto cert = classify::nonexistence_certificate(box, n);

  Json trace = Json::array();
  for (const auto& s : cert.elimination_trace) {
    trace.push_back({{"identity", s.claim},
                     {"consequence", s.consequence},
                     {"exact", s.exact},
                     {"numeric_error", s.numeric_error}});
  }
  Json j;
  j["config"] = config_echo(cfg);
  j["equations"] = cert.equations;
  j["elimination_trace"] = std::move(trace);
  j["final_constraint"] = cert.final_constraint;
  j["trace_complete"] = cert.trace_complete;
  j["grid_box"] = {{"A", range_json(box.A)},
                   {"B", range_json(box.B)},
                   {"alpha", range_json(box.alpha)},
                   {"c", range_json(box.c)},
                   {"min_gap", box.min_gap}};
  j["grid_n"] = cert.grid_n;
  j["points_scanned"] = cert.points_scanned;
  j["grid_min_residual"] = cert.grid_min_residual;
  j["argmin"] = {{"A", cert.argmin[0]},
                 {"B", cert.argmin[1]},
                 {"alpha", cert.argmin[2]},
                 {"c", cert.argmin[3]}};
  j["degree_at_min"] = cert.degree_at_min;
  j["conclusion"] = cert.conclusion;
  return dump(j);
}

// ---- holonomy -----------------------------------------------------------

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = std::min(s.find(',', start), s.size());
    Params tmp{{"coeffs", s.substr(start, comma - start)}};
    out.push_back(number(tmp, "coeffs"));
    start = comma + 1;
  }
  return out;
}

std::string render_holonomy(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const int genus = bounded_int(p, "genus", 1, 1'000'000);
  if (!has(p, "coeffs")) throw Error(ErrorKind::Parameter, "missing --coeffs");
  const auto ch = classify::flat_holonomy(genus, parse_list(p.at("coeffs")));
  const auto reduced = classify::lattice_reduce(ch);
  Json values = Json::array();
  for (const auto& z : ch.values()) values.push_back({z.real(), z.imag()});
  Json j;
  j["config"] = config_echo(cfg);
  j["genus"] = ch.genus;
  j["coefficients"] = ch.coefficients;
  j["reduced"] = reduced.coefficients;
  j["values"] = std::move(values);
  j["trivial"] = std::all_of(reduced.coefficients.begin(), reduced.coefficients.end(),
                             [](double x) { return x == 0.0; });
  return dump(j);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : commands()) n.push_back(s.name);
    return n;
  }();
  return names;
}

const std::vector<std::string>& parameter_keys(const std::string& subcommand) {
  return command_for(subcommand).keys;
}

std::string render(const RunConfig& config) {
  const Command& cmd = command_for(config.subcommand);
  for (const auto& [key, value] : config.params) {
    if (std::find(cmd.keys.begin(), cmd.keys.end(), key) == cmd.keys.end()) {
      throw Error(ErrorKind::Parameter,
                  "unknown parameter --" + key + " for " + config.subcommand);
    }
  }
  const Format fmt = config.format.value_or(cmd.csv ? Format::Csv : Format::Json);
  if (fmt == Format::Csv && !cmd.csv) {
    throw Error(ErrorKind::Parameter, config.subcommand + " only writes json");
  }
  if (cmd.name == "profile") return render_profile(config, fmt);
  if (cmd.name == "flatness") return render_flatness(config);
  if (cmd.name == "example") return render_example(config);
  if (cmd.name == "cotton") return render_cotton(config);
  if (cmd.name == "classify") return render_classify(config);
  if (cmd.name == "nonexistence") return render_nonexistence(config);
  return render_holonomy(config);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string text = render(config);
    if (config.out.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
      if (!file) throw Error(ErrorKind::Parameter, "cannot write '" + config.out + "'");
      file << text;
      if (!file.flush()) throw Error(ErrorKind::Parameter, "write to '" + config.out + "' failed");
    }
    return 0;
  } catch (const Error& e) {
    err << "error[" << error_code(e.kind()) << "]: " << one_line(e.what()) << "\n";
    return exit_status(e.kind());
  } catch (const std::exception& e) {
    err << "error[internal]: " << one_line(e.what()) << "\n";
    return 1;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Curvature of S^1-invariant metrics on circle bundles over surfaces",
               "bundlecurv"};
  app.require_subcommand(1, 1);
  std::string out;
  std::string format;
  app.add_option("--out", out, "output file (default: standard output)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& s : commands()) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    for (const auto& key : s.keys) sub->add_option("--" + key, values[s.name][key]);
    subs[s.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[parameter]: " << one_line(e.what()) << "\n";
    return 2;
  }

  RunConfig config;
  config.out = out;
  if (format == "csv") config.format = Format::Csv;
  if (format == "json") config.format = Format::Json;
  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    config.subcommand = name;
    for (const auto& key : command_for(name).keys) {
      if (sub->count("--" + key) > 0) config.params[key] = values[name][key];
    }
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace bundlecurv::cli
