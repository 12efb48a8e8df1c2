#include "otreg/lab/experiments.hpp"

#include "otreg/analysis/corner_growth.hpp"
#include "otreg/analysis/eccentricity.hpp"
#include "otreg/analysis/engulfing.hpp"
#include "otreg/analysis/hessian.hpp"
#include "otreg/analysis/loglog_fit.hpp"
#include "otreg/analysis/obliqueness.hpp"
#include "otreg/error.hpp"
#include "otreg/io.hpp"
#include "otreg/lab/output.hpp"
#include "otreg/ot/legendre.hpp"
#include "otreg/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>

namespace otreg::lab {

namespace fs = std::filesystem;
using namespace otreg::analysis;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", i);
  return stem + buf + ext;
}

Json point_json(const Vec2& p) { return Json::array({p.x(), p.y()}); }

Json fit_json(const PowerFit& f) {
  return {{"exponent", f.exponent}, {"ci_low", f.ci_low},   {"ci_high", f.ci_high},
          {"r2", f.r2},             {"samples", f.samples}, {"log_prefactor", f.log_prefactor}};
}

// Shared state of one run.
struct Context {
  const ExperimentConfig& config;
  const SolvedPair& pair;
  const RunOptions& options;
  fs::path out_dir;
  std::map<std::string, double> metrics;
  Json details = Json::object();
  std::vector<std::string> files;

  const ConvexPolygon& u1() const { return pair.source; }
  const ConvexPolygon& u2() const { return pair.target; }
  const ot::PLConvexPotential& psi() const { return pair.result.potential; }
  const Json& params() const { return config.params; }
  std::size_t n() const { return pair.cloud.size(); }

  FitOptions fit_options() const {
    FitOptions f;
    f.resamples = param_count(params(), "bootstrap_resamples", 200);
    f.seed = config.seed;
    return f;
  }

  void write_csv(const std::string& name, const CsvTable& t) {
    t.write(out_dir / name);
    files.push_back(name);
  }
  void write_svg(const std::string& name, const SvgFigure& f) {
    f.write(out_dir / name);
    files.push_back(name);
  }
  std::shared_ptr<const SolvedPair> solve_at(std::size_t n_other) const { return options.provider(config, n_other); }
};

// Base points: {"vertices": "all" | [k, ...], "boundary_samples": m,
// "points": [[x, y], ...], "centroid": bool}.
std::vector<Vec2> base_points(const Json& params, const ConvexPolygon& u1, const Json& fallback) {
  const Json& spec = params.contains("base_points") ? params.at("base_points") : fallback;
  if (!spec.is_object()) throw ConfigError("config: params.base_points: expected an object");
  std::vector<Vec2> out;
  if (spec.contains("vertices")) {
    const Json& v = spec.at("vertices");
    if (v.is_string() && v.get<std::string>() == "all") {
      for (const Vec2& p : u1.vertices()) out.push_back(p);
    } else if (v.is_array()) {
      for (const Json& k : v) {
        if (!k.is_number_integer() || k.get<std::int64_t>() < 0 || k.get<std::size_t>() >= u1.size())
          throw ConfigError("config: params.base_points.vertices: index out of range");
        out.push_back(u1[k.get<std::size_t>()]);
      }
    } else {
      throw ConfigError("config: params.base_points.vertices: expected \"all\" or an index list");
    }
  }
  const std::size_t m = param_count(spec, "boundary_samples", 0);
  for (std::size_t k = 0; k < m; ++k)
    out.push_back(u1.point_at_arc(u1.perimeter() * (static_cast<double>(k) + 0.5) / static_cast<double>(m)).point);
  if (spec.contains("points"))
    for (const Json& p : spec.at("points")) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("config: params.base_points.points: expected [x, y]");
      out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  if (spec.contains("centroid") && spec.at("centroid").get<bool>()) out.push_back(u1.centroid());
  if (out.empty()) throw ConfigError("config: params.base_points selects no points");
  return out;
}

CurveOptions curve_options(const Json& params, double h_max, double h_min) {
  CurveOptions c;
  c.h_max = param_number(params, "h_max", h_max);
  c.h_min = param_number(params, "h_min", h_min);
  c.per_decade = param_count(params, "per_decade", 8);
  c.floor_cells = param_number(params, "floor_cells", 20.0);
  if (!(c.h_max > c.h_min && c.h_min > 0.0)) throw ConfigError("config: params: need h_max > h_min > 0");
  return c;
}

// Curves at every base point, one eccentricity CSV each.
std::vector<EccentricityCurve> curves(Context& ctx, const std::vector<Vec2>& pts, const CurveOptions& opt) {
  std::vector<EccentricityCurve> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = eccentricity_curve(ctx.psi(), ctx.u1(), pts[i], opt); });
  for (std::size_t i = 0; i < out.size(); ++i) {
    CsvTable t({"h", "eta", "vol_ratio_in", "vol_ratio_full", "centring_residual"});
    for (const EccentricitySample& s : out[i].samples)
      t.add_row({s.h, s.eta, s.vol_ratio_in, s.vol_ratio_full, s.centring_residual});
    ctx.write_csv(indexed("eccentricity", i, ".csv"), t);
  }
  return out;
}

void sections_figure(Context& ctx, const std::vector<Vec2>& pts, const std::vector<EccentricityCurve>& cs) {
  const auto [lo, hi] = ctx.u1().bbox();
  SvgFigure fig(lo, hi);
  fig.polygon(ctx.u1(), "black", "none", 2.0, "U1");
  const std::size_t shown = std::min<std::size_t>(pts.size(), 6);
  for (std::size_t i = 0; i < shown; ++i) {
    fig.point(pts[i], "red", "base point " + std::to_string(i));
    const auto& s = cs[i].samples;
    for (std::size_t k = 0; k < s.size(); k += 8) {
      fig.polygon(s[k].section, "steelblue", "none", 1.0, "section h=" + format_number(s[k].h));
      fig.ellipse(s[k].ellipse, "darkorange", "E_h h=" + format_number(s[k].h));
    }
  }
  ctx.write_svg("sections.svg", fig);
}

void run_eccentricity_growth(Context& ctx) {
  const auto pts = base_points(ctx.params(), ctx.u1(), {{"vertices", "all"}, {"boundary_samples", 24}});
  const auto cs = curves(ctx, pts, curve_options(ctx.params(), 0.1, 1e-6));
  double exp_max = -std::numeric_limits<double>::infinity(), ci_max = exp_max, eta_max = 0.0;
  std::size_t samples_min = std::numeric_limits<std::size_t>::max(), skipped = 0, floors = 0;
  Json per = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> inv_h, eta;
    for (const auto& s : cs[i].samples) {
      inv_h.push_back(1.0 / s.h);
      eta.push_back(s.eta);
      eta_max = std::max(eta_max, s.eta);
    }
    samples_min = std::min(samples_min, inv_h.size());
    skipped += cs[i].skipped.size();
    floors += cs[i].reached_floor ? 1 : 0;
    Json entry = {{"x0", point_json(pts[i])},
                  {"samples", inv_h.size()},
                  {"skipped", cs[i].skipped.size()},
                  {"reached_floor", cs[i].reached_floor},
                  {"csv", indexed("eccentricity", i, ".csv")}};
    if (inv_h.size() >= 3) {
      const PowerFit f = fit_power_law(inv_h, eta, ctx.fit_options());
      exp_max = std::max(exp_max, f.exponent);
      ci_max = std::max(ci_max, f.ci_high);
      entry["fit"] = fit_json(f);
    } else {
      exp_max = ci_max = kNaN;  // too few samples: no claim
    }
    per.push_back(entry);
  }
  ctx.metrics["eta_exponent_max"] = exp_max;
  ctx.metrics["eta_ci_high_max"] = ci_max;
  ctx.metrics["eta_max"] = eta_max;
  ctx.metrics["samples_min"] = static_cast<double>(samples_min);
  ctx.metrics["centring_skipped"] = static_cast<double>(skipped);
  ctx.metrics["floor_reached_fraction"] = static_cast<double>(floors) / static_cast<double>(pts.size());
  ctx.details["base_points"] = per;
  sections_figure(ctx, pts, cs);
}

void run_volume_bounds(Context& ctx) {
  const auto pts =
      base_points(ctx.params(), ctx.u1(), {{"vertices", "all"}, {"boundary_samples", 8}, {"centroid", true}});
  const auto cs = curves(ctx, pts, curve_options(ctx.params(), 0.1, 1e-3));
  double band_in = 0.0, band_full = 0.0;
  double in_lo = std::numeric_limits<double>::infinity(), in_hi = 0.0;
  double full_lo = std::numeric_limits<double>::infinity(), full_hi = 0.0;
  std::size_t samples_min = std::numeric_limits<std::size_t>::max();
  Json per = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double a = std::numeric_limits<double>::infinity(), b = 0.0, c = a, d = 0.0;
    for (const auto& s : cs[i].samples) {
      a = std::min(a, s.vol_ratio_in);
      b = std::max(b, s.vol_ratio_in);
      c = std::min(c, s.vol_ratio_full);
      d = std::max(d, s.vol_ratio_full);
    }
    samples_min = std::min(samples_min, cs[i].samples.size());
    if (cs[i].samples.empty()) {
      band_in = band_full = kNaN;
    } else {
      band_in = std::max(band_in, b / a);
      band_full = std::max(band_full, d / c);
    }
    in_lo = std::min(in_lo, a);
    in_hi = std::max(in_hi, b);
    full_lo = std::min(full_lo, c);
    full_hi = std::max(full_hi, d);
    per.push_back({{"x0", point_json(pts[i])},
                   {"samples", cs[i].samples.size()},
                   {"vol_ratio_in", {a, b}},
                   {"vol_ratio_full", {c, d}},
                   {"csv", indexed("eccentricity", i, ".csv")}});
  }
  ctx.metrics["vol_in_band_max"] = band_in;
  ctx.metrics["vol_full_band_max"] = band_full;
  ctx.metrics["vol_in_min"] = in_lo;
  ctx.metrics["vol_in_max"] = in_hi;
  ctx.metrics["vol_full_min"] = full_lo;
  ctx.metrics["vol_full_max"] = full_hi;
  ctx.metrics["samples_min"] = static_cast<double>(samples_min);
  ctx.details["base_points"] = per;
  sections_figure(ctx, pts, cs);
}

// max over h of eta(h/M) / eta(h) at each base point of one solution.
struct StepResult {
  double ratio_max = 0.0;
  std::size_t pairs = 0;
};

StepResult eccentricity_steps(const ot::PLConvexPotential& psi, const ConvexPolygon& u1, const std::vector<Vec2>& pts,
                              const CurveOptions& opt, double m, CsvTable* table) {
  struct Row {
    double base, h, eta, eta_m, ratio;
  };
  std::vector<std::vector<Row>> rows(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const EccentricityCurve c = eccentricity_curve(psi, u1, pts[i], opt);
    CentringOptions centring;
    for (const auto& s : c.samples) {
      centring.initial_slope = s.slope;
      try {
        const Section small = centred_section(psi, pts[i], s.h / m, centring);
        if (section_cells(small.polygon, u1, psi.size()) < opt.floor_cells) break;
        const double eta_m = fit_ellipse(small.polygon, s.h / m).eccentricity();
        rows[i].push_back({static_cast<double>(i), s.h, s.eta, eta_m, eta_m / s.eta});
      } catch (const AnalysisError&) {
        continue;
      }
    }
  });
  StepResult r;
  for (const auto& rs : rows)
    for (const Row& row : rs) {
      r.ratio_max = std::max(r.ratio_max, row.ratio);
      ++r.pairs;
      if (table) table->add_row({row.base, row.h, row.eta, row.eta_m, row.ratio});
    }
  return r;
}

void run_eccentricity_step(Context& ctx) {
  const auto pts = base_points(ctx.params(), ctx.u1(), {{"vertices", "all"}, {"boundary_samples", 8}});
  const CurveOptions opt = curve_options(ctx.params(), 0.1, 1e-6);
  const double m = param_number(ctx.params(), "M", 8.0);
  if (!(m > 1.0)) throw ConfigError("config: params.M must exceed 1");
  CsvTable t({"base", "h", "eta", "eta_h_over_M", "ratio"});
  const StepResult r = eccentricity_steps(ctx.psi(), ctx.u1(), pts, opt, m, &t);
  ctx.write_csv("eccentricity_step.csv", t);
  ctx.metrics["step_ratio_max"] = r.pairs ? r.ratio_max : kNaN;
  ctx.metrics["step_pairs"] = static_cast<double>(r.pairs);
  const std::size_t refine = param_count(ctx.params(), "refine_n", 0);
  if (refine > 0) {
    const auto other = ctx.solve_at(refine);
    const StepResult rr = eccentricity_steps(other->result.potential, other->source, pts, opt, m, nullptr);
    ctx.metrics["step_ratio_max_refined"] = rr.pairs ? rr.ratio_max : kNaN;
    ctx.metrics["step_ratio_rel_change"] = std::abs(rr.ratio_max / r.ratio_max - 1.0);
  }
}

// Inward unit normal of the edge containing a boundary point.
Vec2 inward_normal(const ConvexPolygon& p, const BoundaryPoint& bp) {
  const Vec2 e = p.edge(bp.edge).normalized();
  return {-e.y(), e.x()};  // CCW: interior on the left
}

void run_hessian_growth(Context& ctx) {
  const std::size_t m = param_count(ctx.params(), "boundary_samples", 64);
  const double cs = ctx.psi().cell_size();
  const double floor = 3.0 * cs;
  const double d_min = std::max(param_number(ctx.params(), "d_min", floor), floor);
  const double d_max = param_number(ctx.params(), "d_max", 0.15);
  const double r_max = param_number(ctx.params(), "r_max", 0.05);
  const std::size_t per_decade = param_count(ctx.params(), "per_decade", 8);
  if (!(d_max > d_min)) throw ConfigError("config: params: d_max must exceed the resolution floor");
  const std::vector<double> ds = geometric_grid(d_max, d_min, per_decade);
  const ConvexPolygon& u1 = ctx.u1();

  struct Sample {
    Vec2 x;
    double dist, norm, residual;
    std::size_t level;
    bool ok = false;
  };
  std::vector<Sample> samples(m * ds.size());
  parallel_for(samples.size(), [&](std::size_t idx) {
    const std::size_t k = idx / ds.size(), level = idx % ds.size();
    const BoundaryPoint bp =
        u1.point_at_arc(u1.perimeter() * (static_cast<double>(k) + 0.5) / static_cast<double>(m));
    const Vec2 x = bp.point + ds[level] * inward_normal(u1, bp);
    const double dist = -u1.signed_distance(x);
    if (dist < floor) return;
    const double r = std::min(std::max(std::min(0.5 * dist, r_max), floor), dist);
    const HessianEstimate e = hessian_estimate(ctx.psi(), x, r);
    samples[idx] = {x, dist, e.norm(), e.fit_residual, level, true};
  });

  CsvTable t({"x", "y", "dist_to_boundary", "hess_norm", "fit_residual"});
  std::vector<double> level_max(ds.size(), 0.0), level_dist(ds.size(), 0.0), all_inv, all_norm;
  for (const Sample& s : samples) {
    if (!s.ok) continue;
    t.add_row({s.x.x(), s.x.y(), s.dist, s.norm, s.residual});
    level_max[s.level] = std::max(level_max[s.level], s.norm);
    level_dist[s.level] = ds[s.level];
    all_inv.push_back(1.0 / s.dist);
    all_norm.push_back(s.norm);
  }
  ctx.write_csv("hessian.csv", t);
  std::vector<double> inv_d, sup;
  for (std::size_t l = 0; l < ds.size(); ++l)
    if (level_max[l] > 0.0) {
      inv_d.push_back(1.0 / level_dist[l]);
      sup.push_back(level_max[l]);
    }
  ctx.metrics["hess_samples"] = static_cast<double>(all_inv.size());
  if (inv_d.size() >= 3) {
    const PowerFit f = fit_power_law(inv_d, sup, ctx.fit_options());
    ctx.metrics["hess_exponent"] = f.exponent;
    ctx.metrics["hess_ci_high"] = f.ci_high;
    ctx.details["fit_sup"] = fit_json(f);
    const PowerFit g = fit_power_law(all_inv, all_norm, ctx.fit_options());
    ctx.metrics["hess_exponent_all"] = g.exponent;
    ctx.details["fit_all"] = fit_json(g);
  } else {
    ctx.metrics["hess_exponent"] = ctx.metrics["hess_ci_high"] = kNaN;
  }
  ctx.metrics["hess_norm_max"] = *std::max_element(level_max.begin(), level_max.end());
  ctx.details["distances"] = ds;
  ctx.details["collar"] = floor;

  const auto [lo, hi] = u1.bbox();
  SvgFigure fig(lo, hi);
  fig.polygon(u1, "black", "none", 2.0, "U1");
  for (const Sample& s : samples)
    if (s.ok) fig.point(s.x, "purple", "|D2psi|=" + format_number(s.norm));
  ctx.write_svg("hessian.svg", fig);
}

void run_w2p_table(Context& ctx) {
  const std::vector<double> ps = param_numbers(ctx.params(), "p_list", {1.0, 2.0, 4.0, 10.0});
  W2pOptions opt;
  opt.mesh_size = param_number(ctx.params(), "mesh_size", 0.01);
  opt.r_max = param_number(ctx.params(), "r_max", 0.05);
  opt.collar_cells = param_number(ctx.params(), "collar_cells", 3.0);
  const std::size_t refine = param_count(ctx.params(), "refine_n", 4 * ctx.n());
  // Both resolutions use the coarse collar and radius floor, so that the
  // integrals cover the same region with the same stencils.
  const double cs = ctx.psi().cell_size();
  const auto field = [&](const ot::PLConvexPotential& psi) {
    return hessian_field([&psi](const Vec2& x) { return psi(x); }, ctx.u1(), cs, opt);
  };
  const auto coarse_field = field(ctx.psi());
  const auto coarse = w2p_norms(coarse_field, ctx.u1(), opt.mesh_size, ps);
  const auto fine_pair = ctx.solve_at(refine);
  const auto fine = w2p_norms(field(fine_pair->result.potential), ctx.u1(), opt.mesh_size, ps);

  CsvTable t({"p", "n", "integral", "normalized", "norm", "covered_area", "excluded_area"});
  CsvTable h({"x", "y", "dist_to_boundary", "hess_norm", "fit_residual"});
  for (const HessianSample& s : coarse_field) h.add_row({s.x.x(), s.x.y(), s.dist, s.estimate.norm(), s.estimate.fit_residual});
  double change = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    for (const auto* r : {&coarse[k], &fine[k]}) {
      const double n = r == &coarse[k] ? static_cast<double>(ctx.n()) : static_cast<double>(refine);
      t.add_row({r->p, n, r->integral, r->normalized, r->norm, r->covered_area, r->excluded_area});
      finite = finite && std::isfinite(r->integral);
    }
    change = std::max(change, std::abs(fine[k].integral / coarse[k].integral - 1.0));
    ctx.metrics["w2p_integral_p" + format_number(ps[k])] = coarse[k].integral;
    ctx.metrics["w2p_norm_p" + format_number(ps[k])] = coarse[k].norm;
  }
  ctx.write_csv("w2p.csv", t);
  ctx.write_csv("hessian.csv", h);
  ctx.metrics["w2p_rel_change_max"] = change;
  ctx.metrics["w2p_finite"] = finite ? 1.0 : 0.0;
  ctx.metrics["w2p_excluded_area"] = coarse.empty() ? kNaN : coarse[0].excluded_area;
  ctx.details["refine_n"] = refine;
  ctx.details["collar"] = opt.collar_cells * cs;
}

ObliquenessOptions obliqueness_options(const Json& params) {
  ObliquenessOptions o;
  o.snap_cells = param_number(params, "snap_cells", o.snap_cells);
  o.image_tol_spacings = param_number(params, "image_tol_spacings", o.image_tol_spacings);
  return o;
}

void run_obliqueness_scan(Context& ctx) {
  const std::size_t m = param_count(ctx.params(), "samples", 200);
  const auto scan = obliqueness_scan(ctx.u1(), ctx.u2(), ctx.psi(), m, obliqueness_options(ctx.params()));
  CsvTable t({"arc_param", "x0x", "x0y", "LdotL", "RdotR", "margin"});
  double margin = std::numeric_limits<double>::infinity(), ll = margin, rr = margin;
  std::size_t unresolved = 0;
  const double perimeter = ctx.u1().perimeter();
  for (const ObliquenessResult& r : scan) {
    t.add_row({r.arc / perimeter, r.x0.x(), r.x0.y(), r.LdotL, r.RdotR, r.margin});
    margin = std::min(margin, r.margin);
    ll = std::min(ll, r.LdotL);
    rr = std::min(rr, r.RdotR);
    unresolved += r.resolved ? 0 : 1;
  }
  ctx.write_csv("obliqueness.csv", t);
  ctx.metrics["margin_min"] = margin;
  ctx.metrics["LdotL_min"] = ll;
  ctx.metrics["RdotR_min"] = rr;
  ctx.metrics["unresolved"] = static_cast<double>(unresolved);

  const double len = 0.08 * std::max(ctx.u1().diameter(), ctx.u2().diameter());
  const auto draw = [&](const ConvexPolygon& dom, bool source) {
    const auto [lo, hi] = dom.bbox();
    SvgFigure fig(lo, hi);
    fig.polygon(dom, "black", "none", 2.0, source ? "U1" : "U2");
    const std::size_t stride = std::max<std::size_t>(1, scan.size() / 25);
    for (std::size_t k = 0; k < scan.size(); k += stride) {
      const ObliquenessResult& r = scan[k];
      const std::string tag = "sample " + std::to_string(k) + " margin=" + format_number(r.margin);
      fig.ray(source ? r.l1 : r.l2, len, "seagreen", "L " + tag);
      fig.ray(source ? r.r1 : r.r2, len, "crimson", "R " + tag);
    }
    return fig;
  };
  ctx.write_svg("obliqueness_source.svg", draw(ctx.u1(), true));
  ctx.write_svg("obliqueness_target.svg", draw(ctx.u2(), false));
}

void run_corner_growth(Context& ctx) {
  const Json& p = ctx.params();
  Vec2 x0;
  if (p.contains("point")) {
    x0 = Vec2(p.at("point")[0].get<double>(), p.at("point")[1].get<double>());
  } else {
    const std::size_t k = param_count(p, "vertex", 0);
    if (k >= ctx.u1().size()) throw ConfigError("config: params.vertex out of range");
    x0 = ctx.u1()[k];
  }
  const ObliquenessResult ob = obliqueness_check(ctx.u1(), ctx.u2(), ctx.psi(), x0, obliqueness_options(p));
  Vec2 e;
  if (p.contains("direction")) {
    e = Vec2(p.at("direction")[0].get<double>(), p.at("direction")[1].get<double>());
  } else {
    e = ob.l1.direction + ob.r1.direction;  // bisector of the tangent cone
  }
  CornerGrowthOptions opt;
  opt.s_max = param_number(p, "s_max", 0.3);
  opt.s_min = param_number(p, "s_min", 0.0);
  opt.per_decade = param_count(p, "per_decade", 8);
  opt.fit = ctx.fit_options();
  const std::string slope = param_string(p, "slope", "boundary_image");
  if (slope == "boundary_image") {
    // The image matched with the tangent e leans toward.
    opt.slope = e.dot(ob.r1.direction) >= e.dot(ob.l1.direction) ? ob.y_ccw : ob.y_cw;
  } else if (slope != "subgradient") {
    throw ConfigError("config: params.slope must be \"boundary_image\" or \"subgradient\"");
  }
  const CornerGrowth g = corner_growth(ctx.psi(), ob.x0, e, opt);
  CsvTable t({"s", "growth"});
  for (std::size_t k = 0; k < g.s.size(); ++k) t.add_row({g.s[k], g.growth[k]});
  ctx.write_csv("corner_growth.csv", t);
  ctx.metrics["growth_exponent"] = g.fit.exponent;
  ctx.metrics["growth_ci_low"] = g.fit.ci_low;
  ctx.metrics["growth_ci_high"] = g.fit.ci_high;
  ctx.metrics["growth_samples"] = static_cast<double>(g.s.size());
  ctx.details["x0"] = point_json(ob.x0);
  ctx.details["direction"] = point_json(e.normalized());
  ctx.details["slope"] = point_json(opt.slope ? *opt.slope : ctx.psi().gradient(ob.x0));
  ctx.details["excluded"] = g.excluded;
  ctx.details["fit"] = fit_json(g.fit);
}

void run_engulfing(Context& ctx) {
  const Json& p = ctx.params();
  const auto pts = base_points(p, ctx.u1(), {{"boundary_samples", 4}, {"centroid", true}});
  const double h = param_number(p, "h", 0.01);
  const double t = param_number(p, "t", 0.5);
  const double t_bar = param_number(p, "t_bar", 0.75);
  const std::size_t trials = param_count(p, "trials", 3);
  const bool refine = p.contains("refine_h") ? p.at("refine_h").get<bool>() : true;

  struct Row {
    Vec2 x0, x1;
    double h, s_bar;
    bool capped;
  };
  std::vector<std::vector<Row>> rows(pts.size() * trials);
  parallel_for(rows.size(), [&](std::size_t idx) {
    const std::size_t i = idx / trials;
    std::mt19937_64 rng(ctx.config.seed * 1000003ULL + idx);
    const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    // The same barycentric draw at every height.
    const double a = unit(), b = unit();
    for (const double hh : refine ? std::vector<double>{h, 0.5 * h} : std::vector<double>{h}) {
      const Section s0 = centred_section(ctx.psi(), pts[i], hh);
      const auto& v = s0.polygon.vertices();
      const std::size_t k = static_cast<std::size_t>(a * static_cast<double>(v.size())) % v.size();
      const Vec2 z = (1.0 - b) * pts[i] + b * v[k];
      Vec2 x1 = pts[i] + t * (z - pts[i]);
      if (!ctx.u1().contains(x1)) x1 = pts[i] + t * (s0.polygon.centroid() - pts[i]);
      const EngulfingResult r = check_engulfing(ctx.psi(), pts[i], x1, hh, t, t_bar);
      rows[idx].push_back({pts[i], x1, hh, r.s_bar, r.capped});
    }
  });
  CsvTable table({"base", "x0x", "x0y", "x1x", "x1y", "h", "s_bar", "capped"});
  double s_min = std::numeric_limits<double>::infinity(), change = 0.0;
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    for (const Row& r : rows[idx]) {
      table.add_row({static_cast<double>(idx / trials), r.x0.x(), r.x0.y(), r.x1.x(), r.x1.y(), r.h, r.s_bar,
                     r.capped ? 1.0 : 0.0});
      if (r.h == h) s_min = std::min(s_min, r.s_bar);
    }
    if (rows[idx].size() == 2 && rows[idx][0].s_bar > 0.0)
      change = std::max(change, std::abs(rows[idx][1].s_bar / rows[idx][0].s_bar - 1.0));
  }
  ctx.write_csv("engulfing.csv", table);
  ctx.metrics["s_bar_min"] = s_min;
  if (refine) ctx.metrics["s_bar_rel_change_max"] = change;
}

void run_duality_ellipse(Context& ctx) {
  const Json& p = ctx.params();
  const std::size_t m = param_count(p, "boundary_samples", 20);
  const CurveOptions co = curve_options(p, 0.1, 1e-4);
  const double axis_min_eta = param_number(p, "axis_min_eta", 1.2);
  const ot::PLConvexPotential phi = ot::legendre_dual(ctx.psi(), ctx.pair.result.diagram, ctx.u2());
  const ObliquenessOptions oo = obliqueness_options(p);
  const std::vector<double> hs = geometric_grid(co.h_max, co.h_min, co.per_decade);

  struct Row {
    Vec2 x0, y0;
    double h, eta_p, eta_d, ratio, angle;
  };
  std::vector<std::vector<Row>> rows(m);
  std::vector<std::size_t> skipped(m, 0);
  const ConvexPolygon& u1 = ctx.u1();
  parallel_for(m, [&](std::size_t k) {
    const Vec2 x0 = u1.point_at_arc(u1.perimeter() * (static_cast<double>(k) + 0.5) / static_cast<double>(m)).point;
    const ObliquenessResult ob = obliqueness_check(u1, ctx.u2(), ctx.psi(), x0, oo);
    const Vec2 y0 = 0.5 * (ob.y_cw + ob.y_ccw);
    CentringOptions cp, cd;
    for (double h : hs) {
      try {
        const Section sp = centred_section(ctx.psi(), ob.x0, h, cp);
        const Section sd = centred_section(phi, y0, h, cd);
        if (section_cells(sp.polygon, u1, ctx.n()) < co.floor_cells ||
            section_cells(sd.polygon, ctx.u2(), ctx.n()) < co.floor_cells)
          break;
        cp.initial_slope = sp.slope;
        cd.initial_slope = sd.slope;
        const Ellipse ep = fit_ellipse(sp.polygon, h), ed = fit_ellipse(sd.polygon, h);
        const double ratio = std::max(ep.eccentricity() / ed.eccentricity(), ed.eccentricity() / ep.eccentricity());
        double ang = kNaN;
        if (std::min(ep.eccentricity(), ed.eccentricity()) >= axis_min_eta)
          ang = std::acos(std::min(1.0, std::abs(ed.e_long.dot(ep.e_short())))) * 180.0 / std::numbers::pi;
        rows[k].push_back({ob.x0, y0, h, ep.eccentricity(), ed.eccentricity(), ratio, ang});
      } catch (const AnalysisError&) {
        ++skipped[k];
      }
    }
  });
  CsvTable t({"pair", "x0x", "x0y", "y0x", "y0y", "h", "eta_primal", "eta_dual", "ratio", "axis_angle_deg"});
  double ratio_max = 0.0, angle_max = 0.0;
  std::size_t resolved_min = std::numeric_limits<std::size_t>::max(), skipped_total = 0, angles = 0;
  for (std::size_t k = 0; k < m; ++k) {
    for (const Row& r : rows[k]) {
      t.add_row({static_cast<double>(k), r.x0.x(), r.x0.y(), r.y0.x(), r.y0.y(), r.h, r.eta_p, r.eta_d, r.ratio,
                 r.angle});
      ratio_max = std::max(ratio_max, r.ratio);
      if (!std::isnan(r.angle)) {
        angle_max = std::max(angle_max, r.angle);
        ++angles;
      }
    }
    resolved_min = std::min(resolved_min, rows[k].size());
    skipped_total += skipped[k];
  }
  ctx.write_csv("duality.csv", t);
  ctx.metrics["eta_ratio_max"] = ratio_max;
  ctx.metrics["axis_angle_max_deg"] = angles ? angle_max : kNaN;
  ctx.metrics["resolved_h_min"] = static_cast<double>(resolved_min);
  ctx.metrics["pairs"] = static_cast<double>(m);
  ctx.metrics["centring_skipped"] = static_cast<double>(skipped_total);
}

// Checks common to every run: the weak obliqueness inequality on the
// boundary of U1.
void common_checks(Context& ctx) {
  const auto scan = obliqueness_scan(ctx.u1(), ctx.u2(), ctx.psi(), 200, obliqueness_options(ctx.params()));
  double weak = std::numeric_limits<double>::infinity();
  for (const auto& r : scan) weak = std::min(weak, r.margin);
  ctx.metrics["weak_obliqueness_min"] = weak;
}

std::shared_ptr<const SolvedPair> direct_solve(const ExperimentConfig& c, std::size_t n, bool verbose) {
  return std::make_shared<const SolvedPair>(solve_pair(c, n, verbose));
}

}  // namespace

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Pass: return "pass";
    case RunStatus::ThresholdFail: return "threshold_fail";
    case RunStatus::AnalysisFail: return "analysis_fail";
    case RunStatus::SolverFail: return "solver_fail";
  }
  return "unknown";
}

int ExperimentReport::exit_code() const {
  switch (status) {
    case RunStatus::Pass: return 0;
    case RunStatus::SolverFail: return 3;
    default: return 2;
  }
}

std::string solve_key(const ExperimentConfig& c, std::size_t n) {
  const Json key = {{"source", c.source},
                    {"target", c.target},
                    {"n", n ? n : c.solver.n_targets},
                    {"tol", c.solver.tol},
                    {"max_iter", c.solver.max_iter},
                    {"lloyd", c.solver.lloyd_iterations},
                    {"seed", c.seed}};
  return key.dump();
}

SolvedPair solve_pair(const ExperimentConfig& c, std::size_t n, bool verbose) {
  ConvexPolygon u1 = build_domain(c.source);
  ConvexPolygon u2 = build_domain(c.target, &u1);
  ot::SampleOptions so;
  so.lloyd_iterations = c.solver.lloyd_iterations;
  ot::TargetCloud cloud = ot::sample_target(u2, n ? n : c.solver.n_targets, c.seed, u1.area(), so);
  ot::SolverOptions opt;
  opt.tol = c.solver.tol;
  opt.max_iter = c.solver.max_iter;
  opt.verbose = verbose;
  ot::SolveResult r = ot::newton_solve(u1, cloud, opt);
  return SolvedPair{std::move(u1), std::move(u2), std::move(cloud), std::move(r)};
}

ExperimentReport run_experiment(const ExperimentConfig& config, const fs::path& out_dir, const RunOptions& options) {
  RunOptions opts = options;
  if (!opts.provider) {
    const bool verbose = opts.verbose;
    opts.provider = [verbose](const ExperimentConfig& c, std::size_t n) { return direct_solve(c, n, verbose); };
  }
  ExperimentReport report;
  Json& j = report.json;
  j["name"] = config.name;
  j["experiment"] = config.experiment;
  j["config"] = config.raw;
  const auto t0 = std::chrono::steady_clock::now();

  std::shared_ptr<const SolvedPair> pair;
  try {
    pair = opts.provider(config, 0);
  } catch (const SolverError& e) {
    report.status = RunStatus::SolverFail;
    j["error"] = e.what();
  }
  const auto t1 = std::chrono::steady_clock::now();
  std::vector<std::string> files;
  if (pair) {
    const ot::SolveResult& r = pair->result;
    j["solver"] = {{"n_targets", pair->cloud.size()},
                   {"iterations", r.iterations},
                   {"max_residual_rel", r.tol_achieved},
                   {"tol", config.solver.tol},
                   {"covering_start", r.scaled_start},
                   {"max_residual_history", r.max_residual_history}};
    Context ctx{config, *pair, opts, out_dir, {}, Json::object(), {}};
    ctx.metrics["solver_iterations"] = static_cast<double>(r.iterations);
    ctx.metrics["solver_residual_rel"] = r.tol_achieved;
    try {
      const std::string& e = config.experiment;
      if (e == "eccentricity-growth") run_eccentricity_growth(ctx);
      else if (e == "volume-bounds") run_volume_bounds(ctx);
      else if (e == "eccentricity-step") run_eccentricity_step(ctx);
      else if (e == "hessian-growth") run_hessian_growth(ctx);
      else if (e == "w2p-table") run_w2p_table(ctx);
      else if (e == "obliqueness-scan") run_obliqueness_scan(ctx);
      else if (e == "corner-growth") run_corner_growth(ctx);
      else if (e == "engulfing") run_engulfing(ctx);
      else if (e == "duality-ellipse") run_duality_ellipse(ctx);
      else throw ConfigError("config: unknown experiment '" + e + "'");
      common_checks(ctx);
      report.status = RunStatus::Pass;
    } catch (const SolverError& e) {  // a refinement solve failed
      report.status = RunStatus::SolverFail;
      j["error"] = e.what();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      report.status = RunStatus::AnalysisFail;
      j["error"] = e.what();
    }
    report.metrics = ctx.metrics;
    j["details"] = ctx.details;
    files = ctx.files;
  }

  Json metrics = Json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  Json checks = Json::array();
  bool thresholds_ok = true;
  for (const Threshold& t : config.thresholds) {
    const auto it = report.metrics.find(t.metric);
    const bool present = it != report.metrics.end();
    const bool ok = report.status == RunStatus::Pass && present && t.holds(it->second);
    thresholds_ok = thresholds_ok && ok;
    checks.push_back({{"metric", t.metric},
                      {"op", t.op},
                      {"value", t.value},
                      {"actual", present ? Json(it->second) : Json(nullptr)},
                      {"pass", ok}});
  }
  if (report.status == RunStatus::Pass && !thresholds_ok) report.status = RunStatus::ThresholdFail;
  j["thresholds"] = checks;
  j["status"] = status_name(report.status);
  j["pass"] = report.pass();
  j["exit_code"] = report.exit_code();
  j["files"] = files;
  write_file_atomic(out_dir / "result.json", j.dump(2) + "\n");

  const auto t2 = std::chrono::steady_clock::now();
  const Json timing = {{"solve_seconds", std::chrono::duration<double>(t1 - t0).count()},
                       {"analysis_seconds", std::chrono::duration<double>(t2 - t1).count()}};
  write_file_atomic(out_dir / "timing.json", timing.dump(2) + "\n");
  if (opts.verbose)
    std::cerr << config.name << ": " << status_name(report.status) << " ("
              << std::chrono::duration<double>(t2 - t0).count() << " s)\n";
  return report;
}

}  // namespace otreg::lab
