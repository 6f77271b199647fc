#include "kec/verify.hpp"

#include "kec/connection.hpp"
#include "kec/curvature.hpp"
#include "kec/einstein.hpp"
#include "kec/errors.hpp"
#include "kec/structure.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace kec::verify {

using nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"almost_kahler", "integrability", "connection",
                                              "curvature",     "einstein",      "witnesses"};
  return names;
}

std::map<std::string, double> default_tolerances() {
  return {
      {"closed_form", 1e-9},     {"cross_check", 1e-5},  {"fd_oracle", 1e-4},
      {"witness_floor", 1e-3},   {"j_squared", 1e-11},   {"hermitian", 1e-10},
      {"symplectic", 1e-12},     {"dphi", 1e-6},         {"nijenhuis_closed", 1e-8},
      {"commutator", 1e-6},      {"torsion_closed", 1e-10}, {"mixed_ricci", 1e-6},
      {"ricci_symmetry", 1e-6},  {"gamma", 1e-12},       {"euler", 1e-11},
      {"einstein", 1e-6},        {"difference", 1e-8},   {"bianchi", 1e-3},
  };
}

namespace {

constexpr double kOrderFactor = 16.0;
constexpr int kHolomorphicSamples = 50;
constexpr int kDiscrepancyPoints = 5;
constexpr int kGammaGrid = 100;

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string grid_label(int n, double c) { return "n=" + std::to_string(n) + ",c=" + format_real(c); }

std::seed_seq::result_type low_bits(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::seed_seq::result_type high_bits(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

std::uint64_t bits_of(double c) {
  std::uint64_t u = 0;
  static_assert(sizeof u == sizeof c);
  std::memcpy(&u, &c, sizeof u);
  return u;
}

// Independent stream per (seed, n, c, purpose).
std::mt19937_64 stream(std::uint64_t seed, int n, double c, unsigned purpose) {
  const std::uint64_t cb = bits_of(c);
  std::seed_seq seq{low_bits(seed), high_bits(seed), static_cast<std::seed_seq::result_type>(n),
                    low_bits(cb), high_bits(cb), purpose};
  return std::mt19937_64(seq);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(lo * std::pow(hi / lo, k / double(count - 1)));
  return out;
}

enum class Kind {
  MaxBelow,   ///< every value below the threshold
  MaxAbove,   ///< some value in some grid entry above the threshold
  EachAbove,  ///< in every grid entry some value above the threshold
  MinAbove,   ///< every value above the threshold
};

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::MaxBelow: return "max_below";
    case Kind::MaxAbove: return "max_above";
    case Kind::EachAbove: return "each_above";
    case Kind::MinAbove: return "min_above";
  }
  return "";
}

bool uses_min(Kind k) { return k == Kind::MinAbove; }

struct Check {
  Kind kind = Kind::MaxBelow;
  double threshold = 0.0;
  double value = 0.0;
  bool finite = true;
  int samples = 0;

  void add(double x) {
    if (!std::isfinite(x)) finite = false;
    if (samples == 0) value = x;
    else value = uses_min(kind) ? std::min(value, x) : std::max(value, x);
    ++samples;
  }

  bool passed() const {
    if (!finite || samples == 0) return false;
    return kind == Kind::MaxBelow ? value < threshold : value > threshold;
  }
};

struct SuiteGrid {
  std::map<std::string, Check> checks;
  std::map<std::string, std::string> skipped;
  std::vector<std::string> errors;
  json details = json::object();
};

class Recorder {
 public:
  Recorder(const RunConfig& cfg, SuiteGrid& out) : cfg_(cfg), out_(out) {}

  void below(const std::string& check, double x) { below(check, check, x); }
  void below(const std::string& check, const std::string& tol, double x) {
    record(check, Kind::MaxBelow, cfg_.tol(tol), x);
  }
  void above(const std::string& check, const std::string& tol, double x) {
    record(check, Kind::MaxAbove, cfg_.tol(tol), x);
  }
  void each_above(const std::string& check, const std::string& tol, double x) {
    record(check, Kind::EachAbove, cfg_.tol(tol), x);
  }
  void min_above(const std::string& check, double threshold, double x) {
    record(check, Kind::MinAbove, threshold, x);
  }
  void skip(const std::string& check, const std::string& reason) { out_.skipped[check] = reason; }
  json& details() { return out_.details; }

 private:
  void record(const std::string& check, Kind kind, double threshold, double x) {
    auto [it, fresh] = out_.checks.try_emplace(check);
    if (fresh) {
      it->second.kind = kind;
      it->second.threshold = threshold;
    }
    it->second.add(x);
  }

  const RunConfig& cfg_;
  SuiteGrid& out_;
};

struct GridInput {
  const RunConfig& cfg;
  int n;
  double c;
  CotangentModel model;
  std::vector<Vec> zs;     ///< all sampled points
  std::vector<Vec> heavy;  ///< prefix used by nested finite-difference checks
};

Mat canonical_symplectic(int n) {
  Mat m = Mat::Zero(2 * n, 2 * n);
  m.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  m.topRightCorner(n, n) = -Mat::Identity(n, n);
  return m;
}

Mat dense_ricci(const Tensor4& K) {
  const int d = K.dim();
  Mat ric = Mat::Zero(d, d);
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a) ric(b, c) += K(a, b, c, a);
  return ric;
}

double mixed_part(const Mat& m) {
  const auto n = m.rows() / 2;
  return std::max(max_abs(Mat(m.topRightCorner(n, n))), max_abs(Mat(m.bottomLeftCorner(n, n))));
}

RicciBlocks traced_ricci(const CotangentModel& model, const PointState& s) {
  return ricci_blocks(curvature_blocks(s, connection_coeffs_general(s), model.params));
}

CotangentModel with_a_metric(const CotangentModel& model, double a_metric) {
  CotangentModel out = model;
  out.params.a_metric = a_metric;
  return out;
}

void almost_kahler_suite(const GridInput& in, Recorder& rec) {
  const int n = in.n;
  const Mat I = Mat::Identity(2 * n, 2 * n);
  const Mat canon = canonical_symplectic(n);
  for (const Vec& z : in.zs) {
    const PointState s = evaluate(in.model, z);
    const BlockOperator J = assemble_J(s.fiber.G, s.fiber.H);
    const BlockBilinear Gb = assemble_metric(s.fiber.G, s.fiber.H);
    const Mat Jd = J.dense();
    const Mat Gd = Gb.dense();
    rec.below("j_squared", max_abs(Mat(Jd * Jd + I)));
    rec.below("hermitian", max_abs(Mat(Jd.transpose() * Gd * Jd - Gd)));
    rec.below("symplectic", max_abs(Mat(fundamental_form(Gb, J).dense() - canon)));
    rec.below("dphi", dphi_residual(in.model, z, in.cfg.fd));
  }
}

void integrability_suite(const GridInput& in, Recorder& rec) {
  const auto& fd = in.cfg.fd;
  const oracle::OrderCheck oc = oracle::fd_order_check(fd, 0.2, 1e-11, kOrderFactor);
  rec.min_above("fd_order_ratio", kOrderFactor - std::numeric_limits<double>::epsilon(),
                oc.passed ? oc.min_ratio : 0.0);

  const oracle::Frame frame = adapted_frame(in.model);
  for (const Vec& z : in.heavy)
    rec.below("frame_commutator", "commutator", max_abs_diff(oracle::numeric_brackets(frame, z, fd), frame.brackets(z)));

  for (const Vec& z : in.zs) {
    const auto closed = nijenhuis_closed_form(evaluate(in.model, z), in.model.params);
    const auto numeric = nijenhuis_numeric(in.model, z, fd);
    rec.below("nijenhuis_closed", max_component(closed));
    rec.below("nijenhuis_oracle", "cross_check", max_component(numeric));
    rec.below("closed_vs_oracle", "cross_check", max_difference(closed, numeric));
  }

  // Falsification fixtures: detuned metric coefficient, curved base.
  const double a_kahler = std::sqrt(2.0 * in.c);
  const CotangentModel detuned = with_a_metric(in.model, 1.1 * a_kahler);
  CotangentModel bumped = with_a_metric(in.model, a_kahler);
  bumped.chart = ConformalChart(in.c, 0.3);
  for (const Vec& z : in.zs) {
    rec.each_above("detuned_witness", "witness_floor",
                   max_component(nijenhuis_closed_form(evaluate(detuned, z), detuned.params)));
    rec.each_above("curved_base_witness", "witness_floor",
                   max_component(nijenhuis_closed_form(evaluate(bumped, z), bumped.params)));
  }
  for (const Vec& z : in.heavy)
    rec.below("detuned_closed_vs_oracle", "cross_check",
              max_difference(nijenhuis_closed_form(evaluate(detuned, z), detuned.params),
                             nijenhuis_numeric(detuned, z, fd)));
}

void connection_suite(const GridInput& in, Recorder& rec) {
  const auto& fd = in.cfg.fd;
  const bool kahler = in.model.params.is_kahler();
  const oracle::Frame frame = adapted_frame(in.model);
  for (const Vec& z : in.zs) {
    const PointState s = evaluate(in.model, z);
    const ConnectionCoeffs general = connection_coeffs_general(s).coeffs;
    const Tensor3 omega = connection_form(general);
    if (kahler)
      rec.below("general_vs_kahler", "closed_form",
                max_coeff_difference(general, connection_coeffs_kahler(s, in.model.params)));
    rec.below("torsion_closed", torsion_residual(omega, frame_structure_constants(s)));
    rec.below("koszul", "cross_check", max_abs_diff(koszul_connection(in.model, z, fd), omega));
    rec.below("torsion_fd", "cross_check", torsion_residual(omega, oracle::numeric_brackets(frame, z, fd)));
    rec.below("metric_compatibility", "cross_check", metric_compatibility_residual(in.model, z, omega, fd));
    if (kahler) rec.below("nabla_j", "cross_check", nabla_J_residual(in.model, z, omega, fd));
  }
  if (!kahler) {
    rec.skip("general_vs_kahler", "a_metric differs from sqrt(2c)");
    rec.skip("nabla_j", "a_metric differs from sqrt(2c)");
  }
}

const char* const kNotKahler = "curvature block formulas need a_metric = sqrt(2c)";

void curvature_suite(const GridInput& in, Recorder& rec) {
  if (!in.model.params.is_kahler()) {
    for (const char* name : {"ricci_trace_vs_closed", "ricci_symmetry", "curvature_fd", "pair_symmetry",
                             "mixed_ricci"})
      rec.skip(name, kNotKahler);
    return;
  }
  const auto& fd = in.cfg.fd;
  for (const Vec& z : in.zs) {
    const PointState s = evaluate(in.model, z);
    const RicciBlocks tr = traced_ricci(in.model, s);
    const RicciBlocks cf = ricci_closed_form(s, in.model.params);
    rec.below("ricci_trace_vs_closed", "cross_check",
              std::max(max_abs(Mat(tr.qq - cf.qq)), max_abs(Mat(tr.pp - cf.pp))));
    rec.below("ricci_symmetry",
              std::max(max_abs(Mat(tr.qq - tr.qq.transpose())), max_abs(Mat(tr.pp - tr.pp.transpose()))));
  }
  const ConnectionField omega = analytic_connection_field(in.model);
  const oracle::Frame frame = adapted_frame(in.model);
  for (const Vec& z : in.heavy) {
    const PointState s = evaluate(in.model, z);
    const Tensor4 K = assemble_curvature(curvature_blocks(s, connection_coeffs_general(s), in.model.params));
    const Tensor4 Kfd = curvature_from_connection(omega, frame, z, fd);
    rec.below("curvature_fd", "fd_oracle", max_abs_diff(K, Kfd));
    rec.below("pair_symmetry", "fd_oracle", pair_symmetry_residual(K, frame_metric(in.model, z)));
    rec.below("mixed_ricci", mixed_part(dense_ricci(Kfd)));
  }
}

void einstein_suite(const GridInput& in, Recorder& rec) {
  const auto& params = in.model.params;
  const VProfile& vp = in.model.profile;
  const auto ts = log_grid(in.cfg.t_range[0], in.cfg.t_range[1], kGammaGrid);
  for (double t : ts) {
    rec.below("gamma", std::abs(gamma_factor(t, vp, params)));
    rec.below("euler", std::abs(euler_ode_residual(t, vp, params)));
    rec.min_above("admissibility_margin", 0.0, vp(t).v + std::sqrt(params.c / (2.0 * t)));
  }
  if (!params.is_kahler()) {
    for (const char* name : {"einstein_closed", "einstein_trace", "difference", "fitted_constant",
                             "einstein_numeric", "ricci_flat"})
      rec.skip(name, kNotKahler);
    return;
  }
  const double lambda = einstein_constant(params);
  std::vector<Mat> ric, met;
  for (const Vec& z : in.zs) {
    const PointState s = evaluate(in.model, z);
    const BlockBilinear Gb = assemble_metric(s.fiber.G, s.fiber.H);
    const RicciBlocks tr = traced_ricci(in.model, s);
    rec.below("einstein_closed", "einstein", einstein_constant_check(ricci_closed_form(s, params), Gb, params));
    rec.below("einstein_trace", "einstein", einstein_constant_check(tr, Gb, params));
    const EinsteinDifference d = einstein_difference(s, tr, Gb, params);
    rec.below("difference", std::max(max_abs(d.qq), max_abs(d.pp)));
    ric.push_back(tr.dense());
    met.push_back(Gb.dense());
  }
  const double fitted = fit_einstein_constant(ric, met);
  rec.below("fitted_constant", "einstein", std::abs(fitted - lambda));
  rec.details()["einstein_constant"] = lambda;
  rec.details()["fitted_constant"] = fitted;

  const oracle::Frame frame = adapted_frame(in.model);
  const ConnectionField koszul = koszul_connection_field(in.model, in.cfg.fd);
  for (const Vec& z : in.heavy) {
    const Mat r = dense_ricci(curvature_from_connection(koszul, frame, z, in.cfg.fd));
    rec.below("einstein_numeric", "fd_oracle", max_abs(Mat(r - lambda * frame_metric(in.model, z))));
  }

  if (vp.is_einstein_family()) {
    CotangentModel flat = in.model;
    flat.params.k_b = 0.0;
    flat.profile = VProfile::einstein(in.c, in.n, params.k_a, 0.0);
    for (const Vec& z : in.zs)
      rec.below("ricci_flat", "einstein", max_abs(traced_ricci(flat, evaluate(flat, z)).dense()));
  } else {
    rec.skip("ricci_flat", "profile is not in the Einstein family");
  }
}

void witnesses_suite(const GridInput& in, Recorder& rec) {
  if (!in.model.params.is_kahler()) {
    rec.skip("holomorphic_spread", kNotKahler);
    rec.skip("nabla_k", kNotKahler);
    rec.skip("second_bianchi", kNotKahler);
    return;
  }
  const int n = in.n;
  auto rng = stream(in.cfg.seed, n, in.c, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const CurvatureField Kf = analytic_curvature_field(in.model);
  std::vector<double> hol;
  const std::size_t count = std::min<std::size_t>(kHolomorphicSamples, in.zs.size());
  for (std::size_t k = 0; k < count; ++k) {
    const PointState s = evaluate(in.model, in.zs[k]);
    AdaptedVector x{Vec(n), Vec(n)};
    for (int i = 0; i < n; ++i) {
      x.h(i) = u(rng);
      x.v(i) = u(rng);
    }
    hol.push_back(holomorphic_sectional_curvature(x, Kf(in.zs[k]), assemble_metric(s.fiber.G, s.fiber.H),
                                                  assemble_J(s.fiber.G, s.fiber.H)));
  }
  const auto [lo, hi] = std::minmax_element(hol.begin(), hol.end());
  rec.above("holomorphic_spread", "witness_floor", *hi - *lo);

  const oracle::Frame frame = adapted_frame(in.model);
  const ConnectionField omega = analytic_connection_field(in.model);
  std::vector<double> probes;
  for (const Vec& z : in.heavy) {
    const Tensor5 nk = covariant_derivative_curvature(Kf, omega(z), frame, z, in.cfg.fd);
    probes.push_back(nk.max_abs());
    rec.above("nabla_k", "witness_floor", probes.back());
    rec.below("second_bianchi", "bianchi", second_bianchi_residual(nk));
  }
  rec.details()["holomorphic_sectional_curvature"] = {
      {"min", *lo}, {"max", *hi}, {"spread", *hi - *lo}, {"values", hol}};
  rec.details()["nabla_k"] = {{"max", *std::max_element(probes.begin(), probes.end())}, {"values", probes}};
}

using SuiteFn = std::function<void(const GridInput&, Recorder&)>;

const std::map<std::string, SuiteFn>& suite_table() {
  static const std::map<std::string, SuiteFn> table{
      {"almost_kahler", almost_kahler_suite}, {"integrability", integrability_suite},
      {"connection", connection_suite},       {"curvature", curvature_suite},
      {"einstein", einstein_suite},           {"witnesses", witnesses_suite},
  };
  return table;
}

struct GridResult {
  int n = 0;
  double c = 0.0;
  std::string label;
  std::map<std::string, SuiteGrid> suites;
  std::map<std::string, double> seconds;
};

GridResult run_grid(const RunConfig& cfg, int n, double c) {
  using clock = std::chrono::steady_clock;
  GridResult out{n, c, grid_label(n, c), {}, {}};
  std::optional<GridInput> prepared;
  try {
    prepared.emplace(GridInput{cfg, n, c, make_model(cfg, n, c), {}, {}});
    for (const CotangentPoint& pt : sample_points(cfg, n, c)) prepared->zs.push_back(pt.z());
  } catch (const std::exception& e) {
    for (const std::string& name : cfg.suites) {
      out.suites[name].errors.push_back(std::string("sampling: ") + e.what());
      out.seconds[name] = 0.0;
    }
    return out;
  }
  GridInput& in = *prepared;
  in.heavy.assign(in.zs.begin(), in.zs.begin() + std::min<std::ptrdiff_t>(cfg.oracle_samples, in.zs.size()));

  for (const std::string& name : cfg.suites) {
    SuiteGrid& sg = out.suites[name];
    Recorder rec(cfg, sg);
    const auto start = clock::now();
    try {
      suite_table().at(name)(in, rec);
    } catch (const std::exception& e) {
      sg.errors.push_back(e.what());
    }
    out.seconds[name] = std::chrono::duration<double>(clock::now() - start).count();
  }
  return out;
}

json check_json(const Check& c) {
  return {{"kind", kind_name(c.kind)}, {"threshold", c.threshold}, {"value", c.finite ? json(c.value) : json()},
          {"samples", c.samples},      {"passed", c.passed()}};
}

// Open items measured on a fixed fixture of the run.
json discrepancies(const RunConfig& cfg) {
  const int n = cfg.dims.front();
  const double c = cfg.curvature_values.front();
  const auto pts = sample_points(cfg, n, c);
  std::vector<Vec> zs;
  for (std::size_t k = 0; k < pts.size() && k < static_cast<std::size_t>(kDiscrepancyPoints); ++k)
    zs.push_back(pts[k].z());
  json out = json::array();

  {
    // K(d/dp_i, delta/delta q^j) d/dp_k: component along d/dp (vertical
    // reading) against the block read as a horizontal output.
    const auto model = CotangentModel::kahler_einstein(n, c, cfg.k_a, cfg.k_b);
    const ConnectionField omega = analytic_connection_field(model);
    const oracle::Frame frame = adapted_frame(model);
    double vertical = 0.0, horizontal = 0.0, along_dp = 0.0;
    for (const Vec& z : zs) {
      const PointState s = evaluate(model, z);
      const CurvatureBlocks b = curvature_blocks(s, connection_coeffs_general(s), model.params);
      const Tensor4 K = curvature_from_connection(omega, frame, z, cfg.fd);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h) {
              vertical = std::max(vertical, std::abs(K(n + i, j, n + k, n + h)));
              along_dp = std::max(along_dp, std::abs(K(n + i, j, n + k, n + h) - b.pqp(i, k, h, j)));
              horizontal = std::max(horizontal, std::abs(K(n + i, j, n + k, h) - b.pqp(i, k, h, j)));
            }
    }
    out.push_back({{"id", "mixed_curvature_block_output"},
                   {"question", "is K(d/dp_i, delta/delta q^j) d/dp_k horizontal or vertical"},
                   {"grid", grid_label(n, c)},
                   {"max_vertical_component", vertical},
                   {"vertical_reading_residual", along_dp},
                   {"horizontal_reading_residual", horizontal},
                   {"matches", horizontal < cfg.tol("fd_oracle") && vertical < cfg.tol("fd_oracle")
                                   ? "horizontal (delta/delta q^h)"
                                   : (along_dp < cfg.tol("fd_oracle") ? "vertical (d/dp_h)" : "neither")}});
  }

  {
    // Coefficient of DiffQQ = lambda p p for a profile outside the family.
    const auto model = CotangentModel::space_form(n, c, std::sqrt(2.0 * c), VProfile::rational());
    double err_without_v = 0.0, err_with_v = 0.0, err_pp = 0.0;
    json samples = json::array();
    for (const Vec& z : zs) {
      const PointState s = evaluate(model, z);
      const double t = s.pt.t();
      const double g = gamma_factor(t, model.profile, model.params);
      const EinsteinDifference d =
          einstein_difference(s, traced_ricci(model, s), assemble_metric(s.fiber.G, s.fiber.H), model.params);
      const Vec& p = s.pt.p();
      const double lambda = p.dot(d.qq * p) / std::pow(p.squaredNorm(), 2);
      const double mu = s.g0.dot(d.pp * s.g0) / std::pow(s.g0.squaredNorm(), 2);
      const double without_v = (std::sqrt(c) + std::sqrt(2.0 * t)) / (4.0 * t) * g;
      const double with_v = (std::sqrt(c) + std::sqrt(2.0 * t) * s.v.v) / (4.0 * t) * g;
      const double pp_factor = g / (8.0 * t * t * (std::sqrt(c) + std::sqrt(2.0 * t) * s.v.v));
      err_without_v = std::max(err_without_v, std::abs(lambda / without_v - 1.0));
      err_with_v = std::max(err_with_v, std::abs(lambda / with_v - 1.0));
      err_pp = std::max(err_pp, std::abs(mu / pp_factor - 1.0));
      samples.push_back({{"t", t}, {"gamma", g}, {"qq_coefficient", lambda}, {"pp_coefficient", mu}});
    }
    out.push_back({{"id", "difference_qq_factor"},
                   {"question", "DiffQQ factor (sqrt(c) + sqrt(2t))/(4t) or (sqrt(c) + sqrt(2t) v)/(4t)"},
                   {"grid", grid_label(n, c)},
                   {"profile", "rational"},
                   {"relative_error_without_v", err_without_v},
                   {"relative_error_with_v", err_with_v},
                   {"relative_error_pp_factor", err_pp},
                   {"matches", err_with_v < cfg.tol("cross_check")
                                   ? (err_without_v < cfg.tol("cross_check") ? "both" : "with v")
                                   : (err_without_v < cfg.tol("cross_check") ? "without v" : "neither")},
                   {"samples", samples}});
  }

  {
    // Kähler-specialized Q, P, S against the general formulas, term by term.
    const auto model = CotangentModel::kahler_einstein(n, c, cfg.k_a, cfg.k_b);
    double dq = 0.0, dp = 0.0, ds = 0.0;
    for (const Vec& z : zs) {
      const PointState s = evaluate(model, z);
      const ConnectionCoeffs g = connection_coeffs_general(s).coeffs;
      const ConnectionCoeffs k = connection_coeffs_kahler(s, model.params);
      dq = std::max(dq, max_abs_diff(g.Q, k.Q));
      dp = std::max(dp, max_abs_diff(g.P, k.P));
      ds = std::max(ds, max_abs_diff(g.S, k.S));
    }
    out.push_back({{"id", "kahler_connection_coefficients"},
                   {"question", "does the specialized Q (no v in its first term) match the general formulas"},
                   {"grid", grid_label(n, c)},
                   {"max_diff_Q", dq},
                   {"max_diff_P", dp},
                   {"max_diff_S", ds},
                   {"matches", std::max({dq, dp, ds}) < cfg.tol("closed_form") ? "yes" : "no"}});
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (dims.empty()) throw ConfigError("dims", "must list at least one dimension");
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (dims[k] < 2 || dims[k] > 6) throw ConfigError("dims[" + std::to_string(k) + "]", "must be in [2, 6]");
  if (curvature_values.empty()) throw ConfigError("curvature_values", "must list at least one value");
  for (std::size_t k = 0; k < curvature_values.size(); ++k)
    if (!(curvature_values[k] > 0.0) || !std::isfinite(curvature_values[k]))
      throw ConfigError("curvature_values[" + std::to_string(k) + "]", "must be positive");
  if (!(k_a >= 0.0) || !std::isfinite(k_a)) throw ConfigError("k_a", "must be >= 0");
  if (!(k_b >= 0.0) || !std::isfinite(k_b)) throw ConfigError("k_b", "must be >= 0");
  try {
    (void)make_profile(profile, 2, 1.0, k_a, k_b);
  } catch (const Error& e) {
    throw ConfigError("profile", e.what());
  }
  if (samples < 1) throw ConfigError("samples", "must be >= 1");
  if (oracle_samples < 1) throw ConfigError("oracle_samples", "must be >= 1");
  if (!(t_range[0] > 0.0) || !std::isfinite(t_range[1])) throw ConfigError("t_range", "must be positive");
  if (!(t_range[0] < t_range[1])) throw ConfigError("t_range", "must be ordered: t_min < t_max");
  fd.validate();
  for (const auto& [name, value] : tolerances)
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("tolerances." + name, "must be > 0");
  for (const auto& [name, value] : default_tolerances())
    if (!tolerances.count(name)) throw ConfigError("tolerances." + name, "missing");
  if (suites.empty()) throw ConfigError("suites", "no suite enabled");
  for (std::size_t k = 0; k < suites.size(); ++k)
    if (!suite_table().count(suites[k]))
      throw ConfigError("suites[" + std::to_string(k) + "]", "unknown suite '" + suites[k] + "'");
  if (!(a_metric_offset > -1.0) || !std::isfinite(a_metric_offset))
    throw ConfigError("a_metric_offset", "must be > -1");
}

json RunConfig::to_json() const {
  return {{"dims", dims},
          {"curvature_values", curvature_values},
          {"k_a", k_a},
          {"k_b", k_b},
          {"profile", profile},
          {"samples", samples},
          {"oracle_samples", oracle_samples},
          {"t_range", t_range},
          {"seed", seed},
          {"fd", {{"base_step", fd.base_step}, {"richardson_levels", fd.richardson_levels},
                  {"relative_scaling", fd.relative_scaling}}},
          {"tolerances", tolerances},
          {"suites", suites},
          {"a_metric_offset", a_metric_offset}};
}

VProfile make_profile(const std::string& selector, int n, double c, double k_a, double k_b) {
  if (selector == "einstein") return VProfile::einstein(c, n, k_a, k_b);
  if (selector == "rational") return VProfile::rational();
  const std::string prefix = "constant:";
  if (selector.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double v0 = 0.0;
    try {
      v0 = std::stod(selector.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != selector.size() - prefix.size() || !std::isfinite(v0))
      throw DomainError("constant profile needs a number, e.g. constant:0.5");
    return VProfile::constant(v0);
  }
  throw DomainError("unknown profile '" + selector + "' (einstein, rational, constant:<v0>)");
}

CotangentModel make_model(const RunConfig& config, int n, double c) {
  const ModelParams params{n, c, (1.0 + config.a_metric_offset) * std::sqrt(2.0 * c), config.k_a, config.k_b};
  return CotangentModel{params, ConformalChart(c), make_profile(config.profile, n, c, config.k_a, config.k_b)};
}

std::vector<CotangentPoint> sample_points(const RunConfig& config, int dim, double c) {
  auto rng = stream(config.seed, dim, c, 1);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> energy(config.t_range[0], config.t_range[1]);
  std::normal_distribution<double> normal;
  const ConformalChart chart(c);
  std::vector<CotangentPoint> out;
  out.reserve(static_cast<std::size_t>(config.samples));
  while (out.size() < static_cast<std::size_t>(config.samples)) {
    Vec q(dim), d(dim);
    for (int i = 0; i < dim; ++i) q(i) = box(rng);
    for (int i = 0; i < dim; ++i) d(i) = normal(rng);
    const double t = energy(rng);
    if (d.norm() < 1e-8) continue;
    const MetricJet jet = chart.jet(q);
    const Vec p = d * std::sqrt(2.0 * t / d.dot(jet.g_inv * d));
    out.emplace_back(q, p, jet);
  }
  return out;
}

std::string Report::dump(bool with_timings) const {
  json doc = body;
  if (with_timings) doc["timings"] = timings;
  return doc.dump(2) + "\n";
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& [name, suite] : body.at("suites").items()) {
    int failed = 0, total = 0;
    for (const auto& [check, c] : suite.at("checks").items()) {
      ++total;
      if (!c.at("passed").get<bool>()) ++failed;
    }
    os << (suite.at("passed").get<bool>() ? "PASS " : "FAIL ") << name << ": " << total - failed << "/" << total
       << " checks";
    if (!suite.at("errors").empty()) os << ", " << suite.at("errors").size() << " errors";
    if (!suite.at("skipped").empty()) os << ", " << suite.at("skipped").size() << " skipped";
    os << "\n";
    for (const auto& [check, c] : suite.at("checks").items())
      if (!c.at("passed").get<bool>())
        os << "    " << check << ": " << c.at("value").dump() << " (" << c.at("kind").get<std::string>() << " "
           << c.at("threshold").dump() << ")\n";
  }
  os << (passed ? "overall: PASS" : "overall: FAIL") << "\n";
  return os.str();
}

Report run_verification(const RunConfig& config) {
  config.validate();
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  std::vector<std::future<GridResult>> futures;
  for (int n : config.dims)
    for (double c : config.curvature_values)
      futures.push_back(std::async(std::launch::async, run_grid, std::cref(config), n, c));
  std::vector<GridResult> grid;
  for (auto& f : futures) grid.push_back(f.get());

  Report report;
  json suites = json::object();
  json timings = json::object();
  bool overall = true;
  for (const std::string& name : config.suites) {
    std::map<std::string, Check> merged;
    json by_grid = json::object();
    json skipped = json::object();
    json details = json::object();
    json errors = json::array();
    for (const GridResult& g : grid) {
      const SuiteGrid& sg = g.suites.at(name);
      for (const auto& [check, c] : sg.checks) {
        by_grid[check][g.label] = c.finite ? json(c.value) : json();
        auto [it, fresh] = merged.try_emplace(check, c);
        if (fresh) continue;
        Check& m = it->second;
        m.finite = m.finite && c.finite;
        m.samples += c.samples;
        m.value = (c.kind == Kind::MinAbove || c.kind == Kind::EachAbove) ? std::min(m.value, c.value)
                                                                            : std::max(m.value, c.value);
      }
      for (const auto& [check, reason] : sg.skipped) skipped[check][g.label] = reason;
      for (const std::string& e : sg.errors) errors.push_back(g.label + ": " + e);
      if (!sg.details.empty()) details[g.label] = sg.details;
      timings["suites"][name][g.label] = g.seconds.at(name);
    }
    json checks = json::object();
    bool passed = errors.empty();
    for (const auto& [check, c] : merged) {
      checks[check] = check_json(c);
      checks[check]["by_grid"] = by_grid[check];
      passed = passed && c.passed();
    }
    suites[name] = {{"passed", passed}, {"checks", checks}, {"skipped", skipped}, {"errors", errors}};
    if (!details.empty()) suites[name]["details"] = details;
    overall = overall && passed;
  }

  json disc;
  try {
    disc = discrepancies(config);
  } catch (const std::exception& e) {
    disc = json::array({{{"id", "error"}, {"message", e.what()}}});
  }

  report.passed = overall;
  report.body = {{"schema_version", 1},
                 {"config", config.to_json()},
                 {"grid", json::array()},
                 {"suites", suites},
                 {"discrepancies", disc},
                 {"overall_pass", overall}};
  for (const GridResult& g : grid) report.body["grid"].push_back({{"n", g.n}, {"c", g.c}, {"label", g.label}});
  timings["total_seconds"] = std::chrono::duration<double>(clock::now() - start).count();
  report.timings = timings;
  return report;
}

}  // namespace kec::verify
