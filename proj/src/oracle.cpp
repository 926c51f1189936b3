#include "widths/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "widths/errors.hpp"
#include "widths/kappa.hpp"
#include "widths/normalize.hpp"

namespace widths {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDim = 4;
constexpr int kStageTwoKeep = 64;

using Point = std::array<double, kMaxDim>;

double norm_q(const Point& x, int dim, double zq) {
  if (zq == 1.0) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += std::fabs(x[i]);
    return s;
  }
  if (zq == 0.5) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += x[i] * x[i];
    return std::sqrt(s);
  }
  const double q = 1.0 / zq;
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += std::pow(std::fabs(x[i]), q);
  return std::pow(s, zq);
}

double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Point& a, int dim) { return std::sqrt(dot(a, a, dim)); }

bool normalize_dir(Point& a, int dim) {
  const double n = norm2(a, dim);
  if (!(n > 1e-12)) return false;
  for (int i = 0; i < dim; ++i) a[i] /= n;
  return true;
}

// Exact minimum over t of the l1 norm of r - t*d: the objective is
// piecewise linear and convex, so the optimum sits on a breakpoint.
double line_min_l1(const Point& r, const Point& d, int dim, double* t_out) {
  double base = 0.0;
  std::array<double, kMaxDim> b{};
  std::array<double, kMaxDim> w{};
  int m = 0;
  for (int i = 0; i < dim; ++i) {
    const double wi = std::fabs(d[i]);
    if (wi > 0.0) {
      b[m] = r[i] / d[i];
      w[m] = wi;
      ++m;
    } else {
      base += std::fabs(r[i]);
    }
  }
  if (m == 0) {
    if (t_out) *t_out = 0.0;
    return base;
  }
  double best = kInf, best_t = 0.0;
  for (int j = 0; j < m; ++j) {
    double g = base;
    for (int i = 0; i < m; ++i) g += w[i] * std::fabs(b[i] - b[j]);
    if (g < best) {
      best = g;
      best_t = b[j];
    }
  }
  if (t_out) *t_out = best_t;
  return best;
}

// Golden-section minimum of t -> ||r - t*d||_q over a bracket that always
// contains the argmin (||r - t d|| > ||r|| once |t| ||d|| > 2 ||r||).
double line_min_golden(const Point& r, const Point& d, int dim, double zq,
                       double* t_out) {
  const double dn = norm_q(d, dim, zq);
  if (!(dn > 0.0)) {
    if (t_out) *t_out = 0.0;
    return norm_q(r, dim, zq);
  }
  const double radius = 2.0 * norm_q(r, dim, zq) / dn + 1e-12;
  auto eval = [&](double t) {
    Point y{};
    for (int i = 0; i < dim; ++i) y[i] = r[i] - t * d[i];
    return norm_q(y, dim, zq);
  };
  constexpr double kGolden = 0.6180339887498949;
  double lo = -radius, hi = radius;
  const double width0 = hi - lo;
  double t1 = hi - kGolden * (hi - lo);
  double t2 = lo + kGolden * (hi - lo);
  double f1 = eval(t1), f2 = eval(t2);
  double best = std::min(f1, f2), best_t = f1 <= f2 ? t1 : t2;
  for (int it = 0; it < 80 && hi - lo > 1e-10 * width0; ++it) {
    if (f1 <= f2) {
      hi = t2;
      t2 = t1;
      f2 = f1;
      t1 = hi - kGolden * (hi - lo);
      f1 = eval(t1);
    } else {
      lo = t1;
      t1 = t2;
      f1 = f2;
      t2 = lo + kGolden * (hi - lo);
      f2 = eval(t2);
    }
    const double f = std::min(f1, f2);
    if (f < best) {
      best = f;
      best_t = f1 <= f2 ? t1 : t2;
    }
  }
  const double f0 = eval(0.0);  // never worse than the untouched residual
  if (f0 < best) {
    best = f0;
    best_t = 0.0;
  }
  if (t_out) *t_out = best_t;
  return best;
}

double line_min(const Point& r, const Point& d, int dim, double zq,
                double* t_out) {
  if (zq == 1.0) return line_min_l1(r, d, dim, t_out);
  return line_min_golden(r, d, dim, zq, t_out);
}

enum class FrameKind { kZero, kCoord, kLine, kPlane, kHyperplane };

struct Frame {
  FrameKind kind = FrameKind::kZero;
  Point u{};            // line/plane direction, or hyperplane normal
  Point v{};            // second plane direction (orthonormal to u)
  double dual = 1.0;    // cached dual norm of the hyperplane normal
  unsigned mask = 0;    // spanned coordinates for kCoord
};

double frame_distance(const Frame& f, const Point& x, int dim, double zq) {
  switch (f.kind) {
    case FrameKind::kZero:
      return norm_q(x, dim, zq);
    case FrameKind::kCoord: {
      Point r{};
      int m = 0;
      for (int i = 0; i < dim; ++i) {
        if (!(f.mask >> i & 1u)) r[m++] = x[i];
      }
      return norm_q(r, m, zq);
    }
    case FrameKind::kHyperplane:
      return std::fabs(dot(f.u, x, dim)) / f.dual;
    case FrameKind::kLine: {
      if (zq == 0.5) {
        const double t = dot(f.u, x, dim);
        const double r2 = dot(x, x, dim) - t * t;
        return std::sqrt(std::max(0.0, r2));
      }
      return line_min(x, f.u, dim, zq, nullptr);
    }
    case FrameKind::kPlane: {
      const double s0 = dot(f.u, x, dim);
      const double t0 = dot(f.v, x, dim);
      if (zq == 0.5) {
        const double r2 = dot(x, x, dim) - s0 * s0 - t0 * t0;
        return std::sqrt(std::max(0.0, r2));
      }
      Point r;
      for (int i = 0; i < dim; ++i) r[i] = x[i] - s0 * f.u[i] - t0 * f.v[i];
      double best = norm_q(r, dim, zq);
      // Alternate exact/golden line minimizations from the l2 start; the
      // objective is convex, so stop once a full round stops paying.
      for (int round = 0; round < 24; ++round) {
        const double before = best;
        double moved = 0.0;
        for (const Point* axis : {&f.u, &f.v}) {
          double step = 0.0;
          const double val = line_min(r, *axis, dim, zq, &step);
          if (val < best) best = val;
          if (step != 0.0) {
            for (int i = 0; i < dim; ++i) r[i] -= step * (*axis)[i];
            moved += std::fabs(step);
          }
        }
        if (moved < 1e-13 || before - best <= 1e-10 * best) break;
      }
      return best;
    }
  }
  return 0.0;
}

struct Samples {
  std::vector<Point> pts;
  int dim = 0;
  int flat_count = 0;  // the structured prefix used as stage-1 witnesses
};

Point scaled_boundary_point(const BallFamily& fam, const Point& dir, int dim) {
  const double t = boundary_scale(fam, std::span<const double>(dir.data(), dim));
  Point x{};
  for (int i = 0; i < dim; ++i) x[i] = t * dir[i];
  return x;
}

// Boundary sample: every sign/support flat pattern first (these are the
// extremal candidates for intersections of lp balls and make good early-
// abort witnesses), then sign-paired random directions pushed to the
// boundary.
Samples make_samples(const BallFamily& fam, const GridResolution& res,
                     std::mt19937_64& rng) {
  Samples s;
  s.dim = fam.ambient_dim;
  const int dim = s.dim;
  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    int bits = 0;
    for (int i = 0; i < dim; ++i) bits += mask >> i & 1u;
    for (unsigned signs = 0; signs < (1u << bits); ++signs) {
      Point dir{};
      int bit = 0;
      for (int i = 0; i < dim; ++i) {
        if (mask >> i & 1u) {
          dir[i] = (signs >> bit & 1u) ? -1.0 : 1.0;
          ++bit;
        }
      }
      s.pts.push_back(scaled_boundary_point(fam, dir, dim));
    }
  }
  s.flat_count = static_cast<int>(s.pts.size());

  std::normal_distribution<double> gauss(0.0, 1.0);
  const int pairs = std::max(0, res.boundary_points) / 2;
  for (int k = 0; k < pairs; ++k) {
    Point dir{};
    do {
      for (int i = 0; i < dim; ++i) dir[i] = gauss(rng);
    } while (!normalize_dir(dir, dim));
    const Point x = scaled_boundary_point(fam, dir, dim);
    s.pts.push_back(x);
    Point neg{};
    for (int i = 0; i < dim; ++i) neg[i] = -x[i];
    s.pts.push_back(neg);
  }
  return s;
}

double eval_frame(const Frame& f, const Samples& s, double zq,
                  double abort_above, int limit = -1) {
  const int count = limit < 0 ? static_cast<int>(s.pts.size()) : limit;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double d = frame_distance(f, s.pts[i], s.dim, zq);
    if (d > worst) {
      worst = d;
      if (worst >= abort_above) break;
    }
  }
  return worst;
}

// Direction pools -----------------------------------------------------------

std::vector<Point> structured_directions(int dim) {
  std::vector<Point> dirs;
  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    int bits = 0;
    int first = -1;
    for (int i = 0; i < dim; ++i) {
      if (mask >> i & 1u) {
        ++bits;
        if (first < 0) first = i;
      }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(bits));
    // Fix the first supported coordinate positive: directions up to sign.
    for (unsigned signs = 0; signs < (1u << bits); ++signs) {
      Point d{};
      int bit = 0;
      bool lead_negative = false;
      for (int i = 0; i < dim; ++i) {
        if (mask >> i & 1u) {
          const bool neg = signs >> bit & 1u;
          if (i == first && neg) lead_negative = true;
          d[i] = neg ? -scale : scale;
          ++bit;
        }
      }
      if (!lead_negative) dirs.push_back(d);
    }
  }
  return dirs;
}

std::vector<Point> grid_directions(int dim, int count, std::mt19937_64& rng) {
  std::vector<Point> dirs = structured_directions(dim);
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = M_PI * static_cast<double>(i) / count;
      dirs.push_back({std::cos(a), std::sin(a), 0.0, 0.0});
    }
  } else if (dim == 3) {
    constexpr double kGoldenAngle = 2.399963229728653;
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = kGoldenAngle * i;
      dirs.push_back({r * std::cos(a), r * std::sin(a), z, 0.0});
    }
  } else {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < count; ++i) {
      Point d{};
      do {
        for (int j = 0; j < dim; ++j) d[j] = gauss(rng);
      } while (!normalize_dir(d, dim));
      dirs.push_back(d);
    }
  }
  return dirs;
}

int auto_direction_count(int dim, int n) {
  if (dim == 2) return 4096;
  if (dim == 3) return 3000;
  return n == 1 ? 4000 : 96;  // dim == 4: line grid or plane pool
}

std::vector<Frame> make_line_frames(int dim, const std::vector<Point>& dirs) {
  std::vector<Frame> frames;
  frames.reserve(dirs.size() + dim);
  for (int i = 0; i < dim; ++i) {
    Frame f;
    f.kind = FrameKind::kCoord;
    f.mask = 1u << i;
    frames.push_back(f);
  }
  for (const Point& d : dirs) {
    Frame f;
    f.kind = FrameKind::kLine;
    f.u = d;
    frames.push_back(f);
  }
  return frames;
}

std::vector<Frame> make_hyperplane_frames(int dim, double zq,
                                          const std::vector<Point>& normals) {
  std::vector<Frame> frames;
  frames.reserve(normals.size());
  for (const Point& w : normals) {
    Frame f;
    f.kind = FrameKind::kHyperplane;
    f.u = w;
    f.dual = lp_norm(std::span<const double>(w.data(), dim), 1.0 - zq);
    frames.push_back(f);
  }
  return frames;
}

bool orthonormalize(Point& u, Point& v, int dim) {
  if (!normalize_dir(u, dim)) return false;
  const double c = dot(u, v, dim);
  for (int i = 0; i < dim; ++i) v[i] -= c * u[i];
  return normalize_dir(v, dim);
}

std::vector<Frame> make_plane_frames(int dim, const std::vector<Point>& pool) {
  std::vector<Frame> frames;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      Frame f;
      f.kind = FrameKind::kCoord;
      f.mask = (1u << i) | (1u << j);
      frames.push_back(f);
    }
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      Point u = pool[i];
      Point v = pool[j];
      if (std::fabs(dot(u, v, dim)) > 0.999) continue;
      if (!orthonormalize(u, v, dim)) continue;
      Frame f;
      f.kind = FrameKind::kPlane;
      f.u = u;
      f.v = v;
      frames.push_back(f);
    }
  }
  return frames;
}

// Turns the winning frame into a perturbable generic representation.
Frame generic_frame(const Frame& f, int dim) {
  if (f.kind != FrameKind::kCoord) return f;
  Frame g;
  int axes[2] = {-1, -1};
  int found = 0;
  for (int i = 0; i < dim; ++i) {
    if (f.mask >> i & 1u) axes[std::min(found++, 1)] = i;
  }
  if (found == 1) {
    g.kind = FrameKind::kLine;
    g.u[axes[0]] = 1.0;
  } else {
    g.kind = FrameKind::kPlane;
    g.u[axes[0]] = 1.0;
    g.v[axes[1]] = 1.0;
  }
  return g;
}

struct BestFrame {
  Frame frame;
  double value = kInf;
};

void refine_frame(BestFrame& best, const Samples& samples, double zq,
                  int rounds) {
  if (best.frame.kind == FrameKind::kZero || rounds <= 0) return;
  Frame work = generic_frame(best.frame, samples.dim);
  // Re-evaluate the generic representation so the incumbent value matches it.
  double incumbent = eval_frame(work, samples, zq, kInf);
  if (incumbent < best.value) {
    best.frame = work;
    best.value = incumbent;
  }
  const int dim = samples.dim;
  const int params = work.kind == FrameKind::kPlane ? 2 * dim : dim;
  double h = 0.3;
  for (int round = 0; round < rounds; ++round) {
    bool improved = false;
    for (int p = 0; p < params; ++p) {
      for (double sign : {1.0, -1.0}) {
        Frame cand = work;
        double* slot = p < dim ? &cand.u[p] : &cand.v[p - dim];
        *slot += sign * h;
        if (cand.kind == FrameKind::kPlane) {
          if (!orthonormalize(cand.u, cand.v, dim)) continue;
        } else {
          if (!normalize_dir(cand.u, dim)) continue;
          if (cand.kind == FrameKind::kHyperplane) {
            cand.dual =
                lp_norm(std::span<const double>(cand.u.data(), dim), 1.0 - zq);
          }
        }
        const double val = eval_frame(cand, samples, zq, best.value);
        if (val < best.value) {
          best.frame = cand;
          best.value = val;
          work = cand;
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.6;
    if (h < 1e-7) break;
  }
}

void check_grid_preconditions(const BallFamily& fam, const WidthQuery& query) {
  if (fam.ambient_dim != query.N) {
    throw InvalidInputError("grid oracle: family dimension disagrees with N");
  }
  if (query.N > kMaxDim) {
    throw RangeError("grid oracle covers N <= 4");
  }
  if (query.n < 0 || query.n > 2) {
    throw RangeError("grid oracle covers n in {0, 1, 2}");
  }
  if (query.zq <= 0.0 || query.zq > 1.0) {
    throw RangeError("grid oracle covers finite q (zq in (0, 1])");
  }
}

}  // namespace

double coordinate_upper_bound(const BallFamily& fam, const WidthQuery& query) {
  if (fam.ambient_dim != query.N) {
    throw InvalidInputError(
        "coordinate_upper_bound: family dimension disagrees with N");
  }
  if (query.n < 0 || query.n > query.N) {
    throw RangeError("coordinate_upper_bound: requires 0 <= n <= N");
  }
  if (query.n == query.N) return 0.0;
  return flat_sup_norm(fam, query.zq, query.N - query.n).value;
}

double inscribed_lower_bound(const BallFamily& fam, const WidthQuery& query) {
  if (fam.ambient_dim != query.N) {
    throw InvalidInputError(
        "inscribed_lower_bound: family dimension disagrees with N");
  }
  if (query.n < 0 || query.n > query.N) {
    throw RangeError("inscribed_lower_bound: requires 0 <= n <= N");
  }
  require_condition4(fam);
  if (query.n == query.N) return 0.0;
  const double nd = static_cast<double>(query.N);
  double c = kInf;
  for (const BallSpec& b : fam.balls) {
    c = std::min(c, b.nu * std::pow(nd, -b.z));
  }
  return c * std::pow(static_cast<double>(query.N - query.n), query.zq);
}

double vk_covering_factor(const BallFamily& fam, double s, int k) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidInputError("vk_covering_factor: scale must be positive");
  }
  if (k < 1 || k > fam.ambient_dim) {
    throw RangeError("vk_covering_factor: requires 1 <= k <= N");
  }
  double c = 0.0;
  for (const BallSpec& b : fam.balls) {
    c = std::max(c, s * std::pow(static_cast<double>(k), b.z) / b.nu);
  }
  return c;
}

BruteForceResult brute_force_width(const BallFamily& fam,
                                   const WidthQuery& query,
                                   const GridResolution& res,
                                   std::uint64_t seed) {
  check_grid_preconditions(fam, query);
  BruteForceResult result;
  result.seed = seed;
  if (query.n >= query.N) {
    result.notes.push_back("n >= N: the subspace can be the whole space");
    return result;
  }

  std::mt19937_64 rng(seed);
  const Samples samples = make_samples(fam, res, rng);
  const int dim = samples.dim;
  const double zq = query.zq;

  if (query.n == 0) {
    Frame zero;
    const double radius = eval_frame(zero, samples, zq, kInf);
    result.lower = radius;
    result.upper = radius;
    result.notes.push_back("n = 0: boundary-sample radius");
    return result;
  }

  const int count =
      res.directions > 0 ? res.directions : auto_direction_count(dim, query.n);
  std::vector<Frame> frames;
  if (query.n == dim - 1) {
    frames = make_hyperplane_frames(dim, zq, grid_directions(dim, count, rng));
  } else if (query.n == 1) {
    frames = make_line_frames(dim, grid_directions(dim, count, rng));
  } else {
    frames = make_plane_frames(
        dim, grid_directions(dim, std::min(count, 256), rng));
  }

  // Stage 1: flat-witness maxima for every grid frame.  Their minimum is the
  // grid-certified value reported as "lower".  Once kStageTwoKeep frames have
  // been evaluated in full, later frames may abort as soon as their running
  // maximum passes the current keep cutoff: an aborted frame's true maximum
  // lies above the cutoff, so it can affect neither the certified minimum nor
  // the stage-2 short list, and the reported values are unchanged.
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(frames.size());
  double grid_certified = kInf;
  std::vector<double> keep_cut;  // smallest fully evaluated maxima, sorted
  keep_cut.reserve(kStageTwoKeep + 1);
  for (int i = 0; i < static_cast<int>(frames.size()); ++i) {
    const bool forced = frames[i].kind == FrameKind::kCoord;
    const double cut =
        (!forced && keep_cut.size() >= static_cast<std::size_t>(kStageTwoKeep))
            ? keep_cut.back()
            : kInf;
    const double flat_max =
        eval_frame(frames[i], samples, zq, cut, samples.flat_count);
    if (flat_max < cut) {  // fully evaluated, not aborted
      grid_certified = std::min(grid_certified, flat_max);
      keep_cut.insert(
          std::lower_bound(keep_cut.begin(), keep_cut.end(), flat_max),
          flat_max);
      if (keep_cut.size() > static_cast<std::size_t>(kStageTwoKeep)) {
        keep_cut.pop_back();
      }
    }
    ranked.push_back({flat_max, i});
  }
  std::sort(ranked.begin(), ranked.end());

  // Stage 2: full-sample maxima for the most promising frames.
  BestFrame best;
  const int keep = std::min<int>(kStageTwoKeep, static_cast<int>(ranked.size()));
  for (int r = 0; r < static_cast<int>(ranked.size()); ++r) {
    const Frame& f = frames[ranked[r].second];
    const bool forced = f.kind == FrameKind::kCoord;  // exact reps stay in
    if (r >= keep && !forced) continue;
    const double val = eval_frame(f, samples, zq, best.value);
    if (val < best.value) {
      best.value = val;
      best.frame = f;
    }
  }

  refine_frame(best, samples, zq, res.refine_rounds);

  result.upper = best.value;
  result.lower = std::min(grid_certified, best.value);
  result.notes.push_back("upper: sample sup over searched+refined subspaces");
  result.notes.push_back("lower: grid-certified flat witnesses (heuristic)");
  return result;
}

SandwichReport sandwich(const BallFamily& fam, const WidthQuery& query,
                        const SandwichOptions& options) {
  SandwichReport report;
  report.estimate = estimate(fam, query, options.auto_normalize);
  const BallFamily& normalized = report.estimate.family_used;
  report.phi = report.estimate.value;
  report.upper = coordinate_upper_bound(normalized, query);
  report.lower = inscribed_lower_bound(normalized, query);
  report.method_tags.push_back("upper:coordinate-flat");
  report.method_tags.push_back("lower:inscribed-cube");

  const bool applicable =
      options.use_grid_oracle && query.N <= kMaxDim && query.n <= 2 &&
      query.zq > 0.0;
  if (applicable) {
    const BruteForceResult grid =
        brute_force_width(normalized, query, options.resolution, options.seed);
    // Fold the heuristic bracket in without ever inverting the rigorous
    // pair: the grid upper may sit below a tight rigorous lower bound by
    // its sampling error, in which case it is clamped and tagged.
    const double upper_candidate = std::max(grid.upper, report.lower);
    if (upper_candidate < report.upper) {
      report.upper = upper_candidate;
      report.method_tags.push_back(upper_candidate == grid.upper
                                       ? "upper:grid-oracle"
                                       : "upper:grid-oracle-clamped");
    }
    const double lower_candidate = std::min(grid.lower, report.upper);
    if (lower_candidate > report.lower) {
      report.lower = lower_candidate;
      report.method_tags.push_back("lower:grid-oracle-heuristic");
    }
  }
  return report;
}

}  // namespace widths
