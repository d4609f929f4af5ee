#include "condual/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace condual {

namespace {

void parallel_for(size_t count, int threads, const std::function<void(size_t, size_t)>& run) {
  if (threads <= 1 || count < 2) {
    run(0, count);
    return;
  }
  size_t workers = std::min<size_t>(threads, count);
  size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    size_t lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(run, lo, hi);
  }
  for (auto& t : pool) t.join();
}

// out[j] = max_i xs[i] * ys[j] - vals[i] over finite vals, -inf when the
// whole slice is +inf. The largest maximizing index is nondecreasing in y
// (lines with larger slope win for larger y), which makes the recursion
// with argmax-restricted ranges exact.
void transform_line(std::span<const double> xs, std::span<const double> vals,
                    std::span<const double> ys, std::span<double> out) {
  struct Rec {
    std::span<const double> xs, vals, ys;
    std::span<double> out;
    void solve(int jlo, int jhi, int ilo, int ihi) {
      if (jlo > jhi) return;
      int jm = jlo + (jhi - jlo) / 2;
      double y = ys[jm];
      double best = -kInf;
      int arg = -1;
      for (int i = ilo; i <= ihi; ++i) {
        if (vals[i] == kInf) continue;
        double t = xs[i] * y - vals[i];
        if (t >= best) {
          best = t;
          arg = i;
        }
      }
      if (arg < 0) {
        for (int j = jlo; j <= jhi; ++j) out[j] = -kInf;
        return;
      }
      out[jm] = best;
      solve(jlo, jm - 1, ilo, arg);
      solve(jm + 1, jhi, arg, ihi);
    }
  };
  Rec r{xs, vals, ys, out};
  r.solve(0, static_cast<int>(ys.size()) - 1, 0, static_cast<int>(xs.size()) - 1);
}

std::vector<double> axis_coords(const GridSpec& g, int j) {
  std::vector<double> xs(g.axis(j).count);
  for (int i = 0; i < g.axis(j).count; ++i) xs[i] = g.coord(j, i);
  return xs;
}

size_t product_counts(const std::vector<int>& counts) {
  size_t p = 1;
  for (int c : counts) p *= static_cast<size_t>(c);
  return p;
}

}  // namespace

GridFunction conjugate_brute(const GridFunction& f, const GridSpec& dual, int threads) {
  require(dual.dims() == f.grid.dims(), "conjugate: grid dimensions differ");
  require_proper(f, "conjugate");
  const int d = f.d;
  const size_t np = f.grid.num_nodes(), nd = dual.num_nodes();
  std::vector<Point> primal_pts(np);
  for (size_t i = 0; i < np; ++i) primal_pts[i] = f.grid.node(i);
  GridFunction out = make_grid_function(dual, d);
  out.claimed_convex = true;
  out.claimed_proper = true;
  parallel_for(nd, threads, [&](size_t lo, size_t hi) {
    for (size_t j = lo; j < hi; ++j) {
      Point y = dual.node(j);
      for (int k = 0; k < d; ++k) {
        double best = -kInf;
        for (size_t i = 0; i < np; ++i) {
          double v = f.at(i, k);
          if (v == kInf) continue;
          double t = dot(primal_pts[i], y) - v;
          if (t > best) best = t;
        }
        out.at(j, k) = best;
      }
    }
  });
  return out;
}

GridFunction conjugate_fast(const GridFunction& f, const GridSpec& dual, int threads) {
  require(dual.dims() == f.grid.dims(), "conjugate: grid dimensions differ");
  require_proper(f, "conjugate");
  const int n = f.grid.dims(), d = f.d;
  GridFunction out = make_grid_function(dual, d);
  out.claimed_convex = true;
  out.claimed_proper = true;

  parallel_for(static_cast<size_t>(d), threads, [&](size_t klo, size_t khi) {
    for (size_t k = klo; k < khi; ++k) {
      // Current value array over a mixed grid: axes < pass are dual already.
      std::vector<int> counts(n);
      for (int j = 0; j < n; ++j) counts[j] = f.grid.axis(j).count;
      std::vector<double> cur(f.grid.num_nodes());
      for (size_t i = 0; i < cur.size(); ++i) cur[i] = f.at(i, k);

      for (int pass = n - 1; pass >= 0; --pass) {
        std::vector<double> xs = axis_coords(f.grid, pass);
        std::vector<double> ys = axis_coords(dual, pass);
        const int m_in = counts[pass], m_out = dual.axis(pass).count;
        std::vector<int> new_counts = counts;
        new_counts[pass] = m_out;
        std::vector<double> next(product_counts(new_counts));

        // Row-major strides around the pass axis.
        size_t inner = 1;
        for (int j = pass + 1; j < n; ++j) inner *= static_cast<size_t>(counts[j]);
        size_t outer = 1;
        for (int j = 0; j < pass; ++j) outer *= static_cast<size_t>(counts[j]);

        std::vector<double> line_in(m_in), line_out(m_out);
        for (size_t o = 0; o < outer; ++o)
          for (size_t s = 0; s < inner; ++s) {
            for (int i = 0; i < m_in; ++i)
              line_in[i] = cur[(o * m_in + i) * inner + s];
            transform_line(xs, line_in, ys, line_out);
            const bool flip = pass > 0;  // sign change between passes
            for (int i = 0; i < m_out; ++i)
              next[(o * m_out + i) * inner + s] = flip ? -line_out[i] : line_out[i];
          }
        counts = std::move(new_counts);
        cur = std::move(next);
      }
      for (size_t i = 0; i < dual.num_nodes(); ++i) out.at(i, k) = cur[i];
    }
  });
  return out;
}

GridFunction conjugate(const GridFunction& f, const GridSpec& dual, ConjMethod m, int threads) {
  return m == ConjMethod::brute ? conjugate_brute(f, dual, threads)
                                : conjugate_fast(f, dual, threads);
}

GridFunction biconjugate(const GridFunction& f, const GridSpec& dual, ConjMethod m, int threads) {
  GridFunction fstar = conjugate(f, dual, m, threads);
  GridFunction bi = conjugate(fstar, f.grid, m, threads);
  bi.claimed_convex = true;
  bi.claimed_proper = true;
  return bi;
}

LscConvexCheck is_lsc_convex(const GridFunction& f, const GridSpec& dual, double tol,
                             ConjMethod m, int threads) {
  GridFunction bi = biconjugate(f, dual, m, threads);
  LscConvexCheck out;
  for (size_t node = 0; node < f.grid.num_nodes(); ++node)
    for (int k = 0; k < f.d; ++k) {
      double v = f.at(node, k), w = bi.at(node, k);
      if (v == kInf) continue;  // a bounded dual grid cannot restore +inf
      if (w == kInf) {
        out.pattern_mismatch = true;
        out.worst_node = node;
        out.worst_atom = k;
        out.lsc_convex = false;
        return out;
      }
      double gap = std::fabs(v - w);
      if (gap > out.max_gap) {
        out.max_gap = gap;
        out.worst_node = node;
        out.worst_atom = k;
      }
    }
  out.lsc_convex = out.max_gap <= tol;
  return out;
}

DualityReport check_duality(const FunctionDescriptor& f, std::span<const Point> test_points,
                            const GridSpec& primal, const GridSpec& dual, double tol,
                            ConjMethod m, int threads) {
  DualityReport rep;
  rep.tol = tol > 0 ? tol : tol_disc(f, primal);

  auto ranges = f.slope_range_on(primal);
  for (int j = 0; j < primal.dims(); ++j)
    if (ranges[j].first < dual.axis(j).lo || ranges[j].second > dual.axis(j).hi)
      rep.dual_grid_truncated = true;

  GridFunction fs = sample(f, primal);
  GridFunction fstar = conjugate(fs, dual, m, threads);
  const int d = f.algebra_size();
  const size_t nd = dual.num_nodes();
  std::vector<Point> dual_pts(nd);
  for (size_t j = 0; j < nd; ++j) dual_pts[j] = dual.node(j);

  for (const Point& requested : test_points) {
    DualityPointRow row;
    row.requested = requested;
    row.node = primal.nearest_node(requested);
    row.x = primal.node(row.node);
    CondExtReal fx = f.eval(row.x);
    for (int k = 0; k < d; ++k) {
      double best = -kInf;
      size_t arg = 0;
      for (size_t j = 0; j < nd; ++j) {
        double t = dot(row.x, dual_pts[j]) - fstar.at(j, k);
        if (t > best) {  // strict: ties keep the lexicographically smallest node
          best = t;
          arg = j;
        }
      }
      double residual = sub_inf_convention(fx[k], best);
      row.value.push_back(fx[k]);
      row.representation.push_back(best);
      row.residual.push_back(residual);
      row.argmax_node.push_back(arg);
      if (residual > rep.max_residual) {
        rep.max_residual = residual;
        rep.worst_point = rep.rows.size();
        rep.worst_atom = k;
      }
      rep.min_residual = std::min(rep.min_residual, residual);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.negative_residual_bug = rep.min_residual < -rep.tol;
  rep.pass = !rep.rows.empty() ? (rep.max_residual <= rep.tol && rep.min_residual >= -1e-12)
                               : true;
  return rep;
}

double young_fenchel_min_slack(const GridFunction& f, const GridFunction& fstar) {
  require(f.d == fstar.d, "young_fenchel_min_slack: atom counts differ");
  double min_slack = kInf;
  const size_t np = f.grid.num_nodes(), nd = fstar.grid.num_nodes();
  std::vector<Point> primal_pts(np), dual_pts(nd);
  for (size_t i = 0; i < np; ++i) primal_pts[i] = f.grid.node(i);
  for (size_t j = 0; j < nd; ++j) dual_pts[j] = fstar.grid.node(j);
  for (size_t i = 0; i < np; ++i)
    for (size_t j = 0; j < nd; ++j) {
      double xy = dot(primal_pts[i], dual_pts[j]);
      for (int k = 0; k < f.d; ++k) {
        double a = f.at(i, k), b = fstar.at(j, k);
        if (a == kInf || b == kInf) continue;  // slack is +inf there
        min_slack = std::min(min_slack, a + b - xy);
      }
    }
  return min_slack;
}

}  // namespace condual
