#include "modshift/cache.hpp"
#include "modshift/contfrac.hpp"
#include "modshift/cosets.hpp"
#include "modshift/error.hpp"
#include "modshift/homology.hpp"
#include "modshift/level.hpp"
#include "modshift/shiftspace.hpp"
#include "modshift/spectrum.hpp"
#include "modshift/thermo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

using namespace modshift;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  std::int64_t level = 0;
  std::string t;
  std::optional<double> beta;
  std::string digits;
  std::string grid;
  std::string alpha;
  std::string x;
  std::string cf;
  std::string coset;
  std::string method = "collocation";
  std::string tail = "zeta-tail";
  std::string format = "json";
  std::string cache_dir;
  std::size_t length = 20;
  unsigned threads = 0;
  bool witnesses = false;
  bool close = false;
  bool no_cache = false;
  NumericsConfig cfg;
};

[[noreturn]] void usage(const std::string& msg) { throw Error("UsageError", msg); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) usage("not a real number: '" + s + "'");
  return v;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part));
  return out;
}

Integer parse_integer(const std::string& s) {
  Integer v;
  if (s.empty() || v.set_str(s, 10) != 0) usage("not an integer: '" + s + "'");
  return v;
}

SignedWord parse_word(const std::string& s) {
  if (s.empty()) usage("--digits is required");
  SignedWord w;
  for (const auto& part : split(s, ',')) w.digits.push_back(parse_integer(part));
  return w;
}

std::vector<double> t_vector(const Options& o, const LevelData& level) {
  std::vector<double> t = parse_reals(o.t);
  if (o.t.empty()) t.assign(level.dimension(), 0.0);
  if (t.size() != level.dimension()) {
    usage("--t needs " + std::to_string(level.dimension()) + " components (2g) at level " +
          std::to_string(level.level()));
  }
  return t;
}

CosetLabel parse_coset(const Options& o, const CosetTable& table) {
  if (o.coset.empty()) return table.label_of(0, 1);
  auto parts = split(o.coset, ':');
  if (parts.size() != 2) parts = split(o.coset, ',');
  if (parts.size() != 2) usage("--coset expects c:d");
  const Integer c = parse_integer(parts[0]), d = parse_integer(parts[1]);
  const std::int64_t n = table.level();
  Integer cm = c % n, dm = d % n;
  if (cm < 0) cm += n;
  if (dm < 0) dm += n;
  return table.label_of(cm.get_si(), dm.get_si());
}

ojson rational_json(const Rational& x) { return ojson::array({x.get_num().get_str(), x.get_den().get_str()}); }

ojson rational_vector_json(const HomologyVector& v) {
  ojson arr = ojson::array();
  for (const Rational& x : v) arr.push_back(rational_json(x));
  return arr;
}

std::string rational_text(const Rational& x) { return x.get_str(); }

ojson point_json(const CosetTable& table, CosetLabel e) {
  const P1Point& p = table.rep(e);
  return ojson::array({p.c, p.d});
}

ojson vertex_json(const TransitionGraph& g, std::size_t v) {
  const VertexState s = g.vertex(v);
  const P1Point& p = g.table().rep(s.coset);
  return ojson::array({p.c, p.d, s.sign});
}

ojson symbols_json(const CosetTable& table, const SymbolSequence& seq) {
  ojson arr = ojson::array();
  for (const SymbolEntry& s : seq.entries) {
    const P1Point& p = table.rep(s.coset);
    ojson digit = s.digit.fits_slong_p() ? ojson(s.digit.get_si()) : ojson(s.digit.get_str());
    arr.push_back(ojson::array({digit, p.c, p.d}));
  }
  return arr;
}

// One result in all three output formats.
struct Output {
  ojson json;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void emit(const Output& out, const std::string& format) {
  if (format == "json") {
    std::cout << out.json.dump() << "\n";
  } else if (format == "csv") {
    auto line = [](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) std::cout << (i ? "," : "") << cells[i];
      std::cout << "\n";
    };
    line(out.header);
    for (const auto& row : out.rows) line(row);
  } else {
    for (const auto& [key, value] : out.json.items()) {
      std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
  }
}

void add_vector_columns(std::vector<std::string>& header, const std::string& name, std::size_t n) {
  for (std::size_t i = 1; i <= n; ++i) header.push_back(name + "_" + std::to_string(i));
}

void add_vector_cells(std::vector<std::string>& row, const std::vector<double>& v) {
  for (double x : v) row.push_back(format_double(x));
}

ojson provenance_json(const Provenance& p) { return to_json(p); }

std::vector<std::string> provenance_cells(const Provenance& p) {
  return {p.method, std::to_string(p.cutoff), std::to_string(p.degree), std::to_string(p.depth),
          format_double(p.tolerance)};
}

const std::vector<std::string> kProvenanceHeader{"method", "K", "m", "n", "tol"};

class Runner {
 public:
  explicit Runner(const Options& o) : o_(o) {}

  std::unique_ptr<LevelData>& level() {
    if (!level_) {
      if (o_.level < 1) usage("--level N (N >= 1) is required");
      std::optional<std::filesystem::path> dir;
      if (!o_.no_cache) dir = o_.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(o_.cache_dir);
      level_ = load_level(o_.level, dir);
    }
    return level_;
  }

  Output cosets() {
    if (o_.level < 1) usage("--level N (N >= 1) is required");
    const CosetTable table(o_.level);
    Output out;
    ojson reps = ojson::array();
    out.header = {"label", "c", "d"};
    for (CosetLabel e = 0; e < table.size(); ++e) {
      const P1Point& p = table.rep(e);
      reps.push_back(ojson::array({p.c, p.d}));
      out.rows.push_back({std::to_string(e), std::to_string(p.c), std::to_string(p.d)});
    }
    out.json = {{"N", o_.level}, {"kappa", table.size()}, {"reps", reps}};
    return out;
  }

  Output invariants() {
    if (o_.level < 1) usage("--level N (N >= 1) is required");
    const SubgroupInvariants inv = subgroup_invariants(o_.level);
    Output out;
    out.json = {{"kappa", inv.kappa}, {"n2", inv.n2}, {"n3", inv.n3}, {"nInf", inv.n_inf}, {"genus", inv.genus}};
    out.header = {"kappa", "n2", "n3", "nInf", "genus"};
    out.rows.push_back({std::to_string(inv.kappa), std::to_string(inv.n2), std::to_string(inv.n3),
                        std::to_string(inv.n_inf), std::to_string(inv.genus)});
    return out;
  }

  Output graph() {
    const TransitionGraph& g = level()->graph();
    Output out;
    ojson vertices = ojson::array();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vertices.push_back(vertex_json(g, v));
    ojson families = ojson::array();
    out.header = {"from_c", "from_d", "from_sign", "to_c", "to_d", "to_sign", "residue", "digit"};
    for (const auto& f : g.families()) {
      families.push_back({{"from", vertex_json(g, f.from)},
                          {"to", vertex_json(g, f.to)},
                          {"residue", f.residue},
                          {"digit", f.digit}});
      std::vector<std::string> row;
      for (std::size_t v : {f.from, f.to}) {
        for (const auto& x : vertex_json(g, v)) row.push_back(std::to_string(x.get<std::int64_t>()));
      }
      row.push_back(std::to_string(f.residue));
      row.push_back(std::to_string(f.digit));
      out.rows.push_back(std::move(row));
    }
    out.json = {{"N", o_.level}, {"vertices", vertices}, {"families", families}};
    return out;
  }

  Output irreducible() {
    const TransitionGraph& g = level()->graph();
    const IrreducibilityReport r = check_finitely_irreducible(g, o_.witnesses);
    Output out;
    out.json = {{"irreducible", r.irreducible},
                {"components", r.component_count},
                {"diameter", r.diameter},
                {"vertices", g.vertex_count()}};
    if (o_.witnesses) out.json["witnesses"] = ojson::parse(witnesses_to_json(g, r.witnesses).dump());
    out.header = {"irreducible", "components", "diameter", "vertices"};
    out.rows.push_back({r.irreducible ? "true" : "false", std::to_string(r.component_count),
                        std::to_string(r.diameter), std::to_string(g.vertex_count())});
    return out;
  }

  Output homology() {
    const LevelData& l = *level();
    const HomologyData& h = l.homology();
    Output out;
    ojson classes = ojson::array();
    out.header = {"c", "d"};
    add_vector_columns(out.header, "class", l.dimension());
    for (CosetLabel e = 0; e < l.table().size(); ++e) {
      classes.push_back({{"coset", point_json(l.table(), e)}, {"class", rational_vector_json(l.symbol_class(e))}});
      const P1Point& p = l.table().rep(e);
      std::vector<std::string> row{std::to_string(p.c), std::to_string(p.d)};
      for (const Rational& x : l.symbol_class(e)) row.push_back(rational_text(x));
      out.rows.push_back(std::move(row));
    }
    out.json = {{"N", o_.level},
                {"genus", l.invariants().genus},
                {"relativeDimension", h.presentation().dimension()},
                {"cuspidalDimension", h.dimension()},
                {"cusps", h.cusps().orbit_count},
                {"coordinates", "homology"},
                {"classes", classes}};
    return out;
  }

  Output encode() {
    const CosetTable& table = level()->table();
    CFInput x;
    if (!o_.x.empty()) {
      const auto parts = split(o_.x, '/');
      if (parts.size() != 2) usage("--x expects p/q");
      const Integer q = parse_integer(parts[1]);
      if (q == 0) usage("--x has a zero denominator");
      x = CFInput::rational(Rational(parse_integer(parts[0]), q));
    } else if (!o_.cf.empty()) {
      try {
        x = nlohmann::json::parse(o_.cf).get<CFInput>();
      } catch (const nlohmann::json::exception& e) {
        usage(std::string("--cf is not valid JSON input: ") + e.what());
      }
    } else {
      usage("encode needs --x p/q or --cf '{\"sign\":1,\"preperiod\":[...],\"period\":[...]}'");
    }
    const CosetLabel e1 = parse_coset(o_, table);
    const SymbolSequence seq = encode_orbit(table, x, e1, o_.length);
    Output out;
    out.json = {{"N", o_.level},
                {"start", point_json(table, e1)},
                {"terminated", seq.terminated},
                {"symbols", symbols_json(table, seq)}};
    out.header = {"index", "digit", "c", "d"};
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const P1Point& p = table.rep(seq.entries[i].coset);
      out.rows.push_back(
          {std::to_string(i + 1), seq.entries[i].digit.get_str(), std::to_string(p.c), std::to_string(p.d)});
    }
    return out;
  }

  Output pressure() {
    const LevelData& l = *level();
    if (!o_.beta) usage("pressure needs --beta");
    const std::vector<double> t = t_vector(o_, l);
    PressureEstimate p;
    if (o_.method == "collocation") {
      p = pressure_collocation(l, t, *o_.beta, o_.cfg);
    } else if (o_.method == "cylinder") {
      p = pressure_cylinder(l, t, *o_.beta, o_.cfg);
    } else {
      usage("--method must be collocation or cylinder");
    }
    Output out;
    out.json = {{"N", o_.level}, {"t", t}, {"beta", *o_.beta}, {"pressure", p.value},
                {"provenance", provenance_json(p.provenance)}};
    add_vector_columns(out.header, "t", t.size());
    out.header.insert(out.header.end(), {"beta", "pressure"});
    out.header.insert(out.header.end(), kProvenanceHeader.begin(), kProvenanceHeader.end());
    std::vector<std::string> row;
    add_vector_cells(row, t);
    row.push_back(format_double(*o_.beta));
    row.push_back(format_double(p.value));
    for (auto& c : provenance_cells(p.provenance)) row.push_back(c);
    out.rows.push_back(std::move(row));
    return out;
  }

  Output beta() {
    const LevelData& l = *level();
    const std::vector<double> t = t_vector(o_, l);
    const PressureEstimate b = solve_beta(l, t, o_.cfg);
    Output out;
    out.json = {{"N", o_.level}, {"t", t}, {"beta", b.value}, {"provenance", provenance_json(b.provenance)}};
    add_vector_columns(out.header, "t", t.size());
    out.header.push_back("beta");
    out.header.insert(out.header.end(), kProvenanceHeader.begin(), kProvenanceHeader.end());
    std::vector<std::string> row;
    add_vector_cells(row, t);
    row.push_back(format_double(b.value));
    for (auto& c : provenance_cells(b.provenance)) row.push_back(c);
    out.rows.push_back(std::move(row));
    return out;
  }

  Output moments() {
    const LevelData& l = *level();
    const std::vector<double> t = t_vector(o_, l);
    const GibbsMoments g = gibbs_moments(l, t, o_.cfg);
    Output out;
    out.json = {{"N", o_.level},
                {"t", t},
                {"beta", g.beta},
                {"meanI", g.meanI},
                {"meanJ", g.meanJ},
                {"alpha", g.alpha},
                {"selfCheckResidual", g.self_check_residual},
                {"coordinates", "homology"},
                {"provenance", provenance_json(g.provenance)}};
    add_vector_columns(out.header, "t", t.size());
    out.header.insert(out.header.end(), {"beta", "meanI"});
    add_vector_columns(out.header, "meanJ", t.size());
    add_vector_columns(out.header, "alpha", t.size());
    out.header.insert(out.header.end(), kProvenanceHeader.begin(), kProvenanceHeader.end());
    std::vector<std::string> row;
    add_vector_cells(row, t);
    row.push_back(format_double(g.beta));
    row.push_back(format_double(g.meanI));
    add_vector_cells(row, g.meanJ);
    add_vector_cells(row, g.alpha);
    for (auto& c : provenance_cells(g.provenance)) row.push_back(c);
    out.rows.push_back(std::move(row));
    return out;
  }

  Output spectrum() {
    const LevelData& l = *level();
    const std::size_t d = l.dimension();
    std::vector<SpectrumPoint> points;
    if (!o_.alpha.empty()) {
      const std::vector<double> a = parse_reals(o_.alpha);
      if (a.size() != d) usage("--alpha needs " + std::to_string(d) + " components (2g)");
      points.push_back(legendre(l, a, o_.cfg));
    } else {
      points = spectrum_curve(l, parse_grid(d), o_.cfg);
    }
    Output out;
    ojson arr = ojson::array();
    add_vector_columns(out.header, "t", d);
    add_vector_columns(out.header, "alpha", d);
    out.header.insert(out.header.end(), {"beta", "dimension", "method", "K", "m", "tol"});
    for (const SpectrumPoint& p : points) {
      ojson j{{"t", p.t}};
      std::vector<std::string> row;
      add_vector_cells(row, p.t);
      if (p.error) {
        j["error"] = *p.error;
        for (std::size_t i = 0; i < d + 2; ++i) row.push_back("nan");
        row.insert(row.end(), {"error", "", "", ""});
      } else {
        j["alpha"] = p.alpha;
        j["beta"] = p.beta;
        j["dimension"] = p.dimension;
        j["provenance"] = provenance_json(p.provenance);
        add_vector_cells(row, p.alpha);
        row.push_back(format_double(p.beta));
        row.push_back(format_double(p.dimension));
        row.insert(row.end(), {p.provenance.method, std::to_string(p.provenance.cutoff),
                               std::to_string(p.provenance.degree), format_double(p.provenance.tolerance)});
      }
      arr.push_back(std::move(j));
      out.rows.push_back(std::move(row));
    }
    out.json = {{"N", o_.level}, {"coordinates", "homology"}, {"points", arr}};
    return out;
  }

  Output periodic_symbol() {
    const LevelData& l = *level();
    const SignedWord word = parse_word(o_.digits);
    const CosetLabel e1 = parse_coset(o_, l.table());
    const SymbolSequence period = o_.close ? close_periodic_word(l.table(), word, e1) : decorate(l.table(), word, e1);
    const PeriodicSymbolValue v = limiting_symbol_periodic(l, period);
    Output out;
    out.json = {{"N", o_.level},
                {"period", symbols_json(l.table(), period)},
                {"numerator", rational_vector_json(v.numerator)},
                {"denominator", v.denominator},
                {"value", v.value},
                {"coordinates", "homology"}};
    add_vector_columns(out.header, "numerator", v.numerator.size());
    out.header.push_back("denominator");
    add_vector_columns(out.header, "value", v.value.size());
    std::vector<std::string> row;
    for (const Rational& x : v.numerator) row.push_back(rational_text(x));
    row.push_back(format_double(v.denominator));
    add_vector_cells(row, v.value);
    out.rows.push_back(std::move(row));
    return out;
  }

 private:
  // "FROM:TO:COUNT" with comma-separated vectors, or explicit points separated by ';'.
  std::vector<std::vector<double>> parse_grid(std::size_t d) const {
    if (o_.grid.empty()) usage("spectrum needs --grid FROM:TO:COUNT or --alpha");
    std::vector<std::vector<double>> grid;
    const auto parts = split(o_.grid, ':');
    if (parts.size() == 3) {
      const auto count = static_cast<std::size_t>(parse_real(parts[2]));
      grid = line_grid(parse_reals(parts[0]), parse_reals(parts[1]), count);
    } else if (parts.size() == 1) {
      for (const auto& p : split(o_.grid, ';')) grid.push_back(parse_reals(p));
    } else {
      usage("--grid expects FROM:TO:COUNT or t;t;...");
    }
    for (const auto& t : grid) {
      if (t.size() != d) usage("grid points need " + std::to_string(d) + " components (2g)");
    }
    return grid;
  }

  const Options& o_;
  std::unique_ptr<LevelData> level_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coset-coded continued fractions, modular symbols and multifractal spectra for Gamma_0(N)."};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--level", o.level, "Level N of Gamma_0(N)");
  app.add_option("--t", o.t, "Comma-separated t vector (length 2g, homology coordinates)");
  app.add_option("--beta", o.beta, "Inverse temperature beta > 1/2");
  app.add_option("--digits", o.digits, "Comma-separated signed digit word");
  app.add_option("--grid", o.grid, "Spectrum grid: FROM:TO:COUNT or t;t;...");
  app.add_option("--alpha", o.alpha, "Comma-separated alpha for a Legendre solve");
  app.add_option("--x", o.x, "Rational input p/q with 0 < |p/q| < 1");
  app.add_option("--cf", o.cf, "Eventually periodic input as JSON {sign, preperiod, period}");
  app.add_option("--coset", o.coset, "Start coset c:d (default 0:1)");
  app.add_option("--length", o.length, "Number of symbols to encode")->check(CLI::PositiveNumber);
  app.add_option("--method", o.method, "Pressure estimator")->check(CLI::IsMember({"collocation", "cylinder"}));
  app.add_option("--cutoff", o.cfg.cutoff, "Digit cutoff K")->check(CLI::PositiveNumber);
  app.add_option("--degree", o.cfg.degree, "Collocation degree m")->check(CLI::Range(2, 512));
  app.add_option("--depth", o.cfg.depth, "Cylinder depth n")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.cfg.tolerance, "Tolerance eps")->check(CLI::PositiveNumber);
  app.add_option("--tail", o.tail, "Digit tail handling")->check(CLI::IsMember({"truncate", "zeta-tail"}));
  app.add_option("--samples", o.cfg.samples, "Monte Carlo paths for deep cylinder sums")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.cfg.seed, "Random seed for cylinder sampling");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--cache-dir", o.cache_dir, std::string("Cache directory (env ") + kCacheEnvVar + ")");
  app.add_flag("--no-cache", o.no_cache, "Do not read or write the cache");
  app.add_option("--threads", o.threads, "Worker threads (default: all cores)");
  app.add_flag("--witnesses", o.witnesses, "irreducible: emit one witness word per vertex pair");
  app.add_flag("--close", o.close, "periodic-symbol: repeat the word until the coset returns");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"cosets", "List coset representatives (c : d) of P^1(Z/N)"},
      {"invariants", "Index, elliptic points, cusps and genus"},
      {"graph", "Vertices and edge families of the transition graph"},
      {"irreducible", "Check finite irreducibility of the shift space"},
      {"homology", "Manin-symbol homology and per-coset classes J(e)"},
      {"encode", "Coset-decorated continued fraction symbols of a point"},
      {"pressure", "Modular pressure P(t, beta)"},
      {"beta", "Root beta(t) of P(t, beta) = 0"},
      {"moments", "Gibbs moments and alpha(t) = grad beta(t)"},
      {"spectrum", "Multifractal spectrum points (forward grid or Legendre solve)"},
      {"periodic-symbol", "Exact limiting modular symbol of a periodic word"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!o.tail.empty()) o.cfg.tail = tail_mode_from_string(o.tail);
    o.cfg.threads = o.threads;
    o.cfg.validate();

    Runner runner(o);
    const std::string cmd = app.get_subcommands().front()->get_name();
    Output out;
    if (cmd == "cosets") out = runner.cosets();
    else if (cmd == "invariants") out = runner.invariants();
    else if (cmd == "graph") out = runner.graph();
    else if (cmd == "irreducible") out = runner.irreducible();
    else if (cmd == "homology") out = runner.homology();
    else if (cmd == "encode") out = runner.encode();
    else if (cmd == "pressure") out = runner.pressure();
    else if (cmd == "beta") out = runner.beta();
    else if (cmd == "moments") out = runner.moments();
    else if (cmd == "spectrum") out = runner.spectrum();
    else out = runner.periodic_symbol();
    emit(out, o.format);
    return 0;
  } catch (const Error& e) {
    std::cerr << ojson{{"error", e.name()}, {"detail", e.detail()}}.dump() << "\n";
    return e.name() == "UsageError" || e.name() == "InvalidConfig" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << ojson{{"error", "InternalError"}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  }
}
