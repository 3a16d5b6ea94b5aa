#pragma once

#include <algorithm>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fsa/estimators.hpp"

namespace fsa {

struct GridBox {
  double re_lo = -1.0, re_hi = 1.0, im_lo = -1.0, im_hi = 1.0;
  bool degenerate() const { return !(re_lo < re_hi) || !(im_lo < im_hi); }
};

struct PointSet {
  std::vector<Complex> points;
  bool empty() const { return points.empty(); }
};

/// Samples of mu(target - lambda I) over a rectangular lambda grid; the closed
/// eps-sublevel sets are the sampled pseudospectra Sp_eps.
struct PseudospectrumGrid {
  GridBox box;
  Index nx = 0, ny = 0;
  std::vector<double> mu_values;  // row-major: iy * nx + ix
  std::vector<double> epsilons;
  bool inner_approximation = false;  // sampled mu_hat >= mu (indicator targets)

  double dx() const { return (box.re_hi - box.re_lo) / static_cast<double>(nx - 1); }
  double dy() const { return (box.im_hi - box.im_lo) / static_cast<double>(ny - 1); }
  double cell_diagonal() const { return std::hypot(dx(), dy()); }
  Complex lambda_at(Index ix, Index iy) const {
    return Complex(box.re_lo + dx() * static_cast<double>(ix),
                   box.im_lo + dy() * static_cast<double>(iy));
  }
  double mu_at(Index ix, Index iy) const {
    return mu_values[static_cast<std::size_t>(iy * nx + ix)];
  }

  /// Closed sublevel set {lambda on the grid : mu <= eps}.
  PointSet sublevel(double eps) const {
    PointSet s;
    for (Index iy = 0; iy < ny; ++iy)
      for (Index ix = 0; ix < nx; ++ix)
        if (mu_at(ix, iy) <= eps) s.points.push_back(lambda_at(ix, iy));
    return s;
  }

  /// Strict-inequality mask on the same grid (the open variant sp_eps).
  std::vector<std::uint8_t> strict_mask(double eps) const {
    std::vector<std::uint8_t> m(mu_values.size());
    for (std::size_t i = 0; i < mu_values.size(); ++i) m[i] = mu_values[i] < eps;
    return m;
  }
};

namespace detail {

inline void validate_grid(const GridBox& box, Index nx, Index ny) {
  if (box.degenerate()) throw std::invalid_argument("pseudo_grid: degenerate box");
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("pseudo_grid: resolution must be at least 2x2");
}

inline Index worker_count(Index requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FSA_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<Index>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<Index>(std::clamp<unsigned>(hw == 0 ? 1 : hw, 1, 8));
}

/// Fills grid rows in parallel; each cell is computed independently, so the
/// result does not depend on the worker count.
template <typename CellFn>
void fill_grid(PseudospectrumGrid& g, Index threads, CellFn&& cell) {
  g.mu_values.assign(static_cast<std::size_t>(g.nx * g.ny), 0.0);
  Index workers = std::min<Index>(worker_count(threads), g.ny);
  auto run_rows = [&](Index w) {
    for (Index iy = w; iy < g.ny; iy += workers)
      for (Index ix = 0; ix < g.nx; ++ix)
        g.mu_values[static_cast<std::size_t>(iy * g.nx + ix)] =
            cell(g.lambda_at(ix, iy));
  };
  if (workers <= 1) {
    run_rows(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) pool.emplace_back(run_rows, w);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Grid of mu(M - lambda I) for a finite square window.
inline PseudospectrumGrid pseudo_grid(const FiniteMatrix& m, const GridBox& box,
                                      Index nx, Index ny,
                                      std::vector<double> epsilons,
                                      Index threads = 0) {
  detail::validate_grid(box, nx, ny);
  if (m.values.rows() != m.values.cols())
    throw std::invalid_argument("pseudo_grid: window must be square");
  PseudospectrumGrid g{box, nx, ny, {}, std::move(epsilons), false};
  BandedSquare base(m.values);
  detail::fill_grid(g, threads,
                    [&base](Complex lambda) { return sigma_min_shifted(base, lambda); });
  return g;
}

/// Grid of the rectangular-window estimator mu_hat(B - lambda I) for an
/// indicator at fixed window m; sampled values are upper bounds for mu, so the
/// sublevel sets are inner approximations and flagged as such.
inline PseudospectrumGrid pseudo_grid(const Indicator& ind, const GridBox& box,
                                      Index nx, Index ny,
                                      std::vector<double> epsilons, Index window_m,
                                      Index threads = 0) {
  detail::validate_grid(box, nx, ny);
  PseudospectrumGrid g{box, nx, ny, {}, std::move(epsilons), true};
  ShiftedMuEstimator est(ind.op, window_m);
  detail::fill_grid(g, threads,
                    [&est](Complex lambda) { return est.mu_hat(lambda); });
  return g;
}

/// Pointwise minimum of grids over the same box: the sublevel sets of the
/// result are the unions of the inputs' sublevel sets.
inline PseudospectrumGrid grid_pointwise_min(
    const std::vector<const PseudospectrumGrid*>& grids) {
  if (grids.empty()) throw std::invalid_argument("grid_pointwise_min: no grids");
  PseudospectrumGrid out = *grids.front();
  for (std::size_t k = 1; k < grids.size(); ++k) {
    const auto& g = *grids[k];
    if (g.nx != out.nx || g.ny != out.ny)
      throw std::invalid_argument("grid_pointwise_min: resolution mismatch");
    for (std::size_t i = 0; i < out.mu_values.size(); ++i)
      out.mu_values[i] = std::min(out.mu_values[i], g.mu_values[i]);
    out.inner_approximation = out.inner_approximation || g.inner_approximation;
  }
  return out;
}

/// Exact Hausdorff distance of two finite nonempty point sets.
inline double hausdorff_distance(const PointSet& s, const PointSet& t) {
  if (s.empty() || t.empty())
    throw std::invalid_argument("hausdorff_distance: empty point set");
  auto directed = [](const PointSet& a, const PointSet& b) {
    double worst = 0.0;
    for (Complex p : a.points) {
      double best = std::numeric_limits<double>::infinity();
      for (Complex q : b.points) best = std::min(best, std::norm(p - q));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(s, t), directed(t, s));
}

namespace detail {

/// Hash grid over one point set for "is some point within tol of p" queries.
class ProximityIndex {
 public:
  ProximityIndex(const PointSet& set, double tol) : tol_(tol) {
    for (Complex p : set.points) cells_[key(p)].push_back(p);
  }
  bool near(Complex p) const {
    auto [cx, cy] = coords(p);
    for (Index ox = -1; ox <= 1; ++ox)
      for (Index oy = -1; oy <= 1; ++oy) {
        auto it = cells_.find((cx + ox) * 0x100000000LL + (cy + oy));
        if (it == cells_.end()) continue;
        for (Complex q : it->second)
          if (std::abs(p - q) <= tol_) return true;
      }
    return false;
  }

 private:
  std::pair<Index, Index> coords(Complex p) const {
    return {static_cast<Index>(std::floor(p.real() / tol_)),
            static_cast<Index>(std::floor(p.imag() / tol_))};
  }
  Index key(Complex p) const {
    auto [cx, cy] = coords(p);
    return cx * 0x100000000LL + cy;
  }
  double tol_;
  std::unordered_map<Index, std::vector<Complex>> cells_;
};

inline std::vector<Complex> dedup_sorted(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Complex a, Complex b) { return approx_equal(a, b); }),
            pts.end());
  return pts;
}

}  // namespace detail

/// Operational set limsup of a sampled set sequence: the points within
/// cluster_tol of at least ceil(L/2) of the L sampled sets (standing in for
/// "infinitely many").
inline PointSet set_limsup(const std::vector<PointSet>& sets, double cluster_tol) {
  if (sets.size() < 2) throw std::invalid_argument("set_limsup: need >= 2 sets");
  std::vector<Complex> candidates;
  for (const auto& s : sets)
    candidates.insert(candidates.end(), s.points.begin(), s.points.end());
  candidates = detail::dedup_sorted(std::move(candidates));
  std::vector<detail::ProximityIndex> indexes;
  indexes.reserve(sets.size());
  for (const auto& s : sets) indexes.emplace_back(s, cluster_tol);
  std::size_t need = (sets.size() + 1) / 2;
  PointSet out;
  for (Complex p : candidates) {
    std::size_t count = 0;
    for (const auto& idx : indexes)
      if (idx.near(p)) ++count;
    if (count >= need) out.points.push_back(p);
  }
  return out;
}

/// Operational set liminf: the points within cluster_tol of every one of the
/// last ceil(L/2) sampled sets (standing in for "all but finitely many").
inline PointSet set_liminf(const std::vector<PointSet>& sets, double cluster_tol) {
  if (sets.size() < 2) throw std::invalid_argument("set_liminf: need >= 2 sets");
  std::size_t tail = (sets.size() + 1) / 2;
  std::size_t first = sets.size() - tail;
  std::vector<detail::ProximityIndex> indexes;
  for (std::size_t i = first; i < sets.size(); ++i)
    indexes.emplace_back(sets[i], cluster_tol);
  std::vector<Complex> candidates = detail::dedup_sorted(sets.back().points);
  PointSet out;
  for (Complex p : candidates) {
    bool all = true;
    for (const auto& idx : indexes)
      if (!idx.near(p)) {
        all = false;
        break;
      }
    if (all) out.points.push_back(p);
  }
  return out;
}

}  // namespace fsa
