#include "elegy/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "elegy/error.hpp"
#include "elegy/rng.hpp"

namespace elegy {

Metric parse_metric(const std::string& name) {
  if (name == "cosine") return Metric::Cosine;
  if (name == "euclidean") return Metric::Euclidean;
  throw ParameterError("unknown metric '" + name + "' (expected cosine or euclidean)");
}

std::vector<std::size_t> consensus_subset(std::size_t features, const ConsensusOptions& options, std::size_t s) {
  Rng rng(options.seed, s);
  auto cols = rng.sample(features, options.subset_size);
  std::sort(cols.begin(), cols.end());
  return cols;
}

namespace {

double distance(const Eigen::MatrixXd& m, Eigen::Index i, Eigen::Index j, const std::vector<std::size_t>& cols,
                Metric metric) {
  double dot = 0.0, ni = 0.0, nj = 0.0, sq = 0.0;
  for (std::size_t c : cols) {
    const auto cc = static_cast<Eigen::Index>(c);
    const double a = m(i, cc), b = m(j, cc);
    dot += a * b;
    ni += a * a;
    nj += b * b;
    sq += (a - b) * (a - b);
  }
  if (metric == Metric::Euclidean) return std::sqrt(sq);
  if (ni == 0.0 || nj == 0.0) return ni == nj ? 0.0 : 1.0;
  return 1.0 - dot / std::sqrt(ni * nj);
}

}  // namespace

std::vector<std::size_t> nearest_neighbours(const Eigen::MatrixXd& matrix, std::size_t row,
                                            const std::vector<std::size_t>& columns, std::size_t k, Metric metric) {
  std::vector<std::pair<double, std::size_t>> d;
  for (Eigen::Index j = 0; j < matrix.rows(); ++j) {
    if (static_cast<std::size_t>(j) == row) continue;
    d.emplace_back(distance(matrix, static_cast<Eigen::Index>(row), j, columns, metric), static_cast<std::size_t>(j));
  }
  k = std::min(k, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(d[i].second);
  return out;
}

ConsensusGraph consensus_graph(const Eigen::MatrixXd& matrix, const ConsensusOptions& options) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  const auto p = static_cast<std::size_t>(matrix.cols());
  if (options.subset_size == 0 || options.subset_size > p) {
    throw ParameterError("subset size " + std::to_string(options.subset_size) + " exceeds feature count " +
                         std::to_string(p));
  }
  if (options.subsets == 0) throw ParameterError("consensus graph needs at least one subset");
  if (options.k == 0) throw ParameterError("k must be positive");
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) throw ParameterError("threshold must lie in [0, 1]");

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.subsets));
  // integer counts per worker, summed afterwards: order-independent
  std::vector<Eigen::MatrixXi> counts(threads, Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  auto work = [&](unsigned t) {
    for (std::size_t s = t; s < options.subsets; s += threads) {
      const auto cols = consensus_subset(p, options, s);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : nearest_neighbours(matrix, i, cols, options.k, options.metric)) {
          counts[t](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 1;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  Eigen::MatrixXi total = counts[0];
  for (unsigned t = 1; t < threads; ++t) total += counts[t];

  ConsensusGraph g;
  g.nodes = n;
  const Eigen::MatrixXi sym = total + total.transpose();
  g.weights = sym.cast<double>() / (2.0 * static_cast<double>(options.subsets));
  for (Eigen::Index i = 0; i < g.weights.rows(); ++i) {
    g.weights(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < g.weights.cols(); ++j) {
      if (g.weights(i, j) < options.threshold || g.weights(i, j) == 0.0) {
        g.weights(i, j) = g.weights(j, i) = 0.0;
      } else {
        g.edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), g.weights(i, j)});
      }
    }
  }
  return g;
}

double fr_spring_length(std::size_t n, const FrOptions& options) {
  const double area = options.area > 0.0 ? options.area : static_cast<double>(std::max<std::size_t>(n, 1));
  return options.c * std::sqrt(area / static_cast<double>(std::max<std::size_t>(n, 1)));
}

double fr_energy(const ConsensusGraph& graph, const Layout2D& layout, double k) {
  double e = 0.0;
  const auto n = layout.points.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = std::max((layout.points.row(i) - layout.points.row(j)).norm(), 1e-12);
      e -= k * k * std::log(d);
      e += graph.weights(i, j) * d * d * d / (3.0 * k);
    }
  }
  return e;
}

namespace {

std::vector<std::vector<std::size_t>> components(const ConsensusGraph& g) {
  std::vector<int> comp(g.nodes, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < g.nodes; ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = static_cast<int>(out.size() - 1);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (std::size_t v = 0; v < g.nodes; ++v) {
        if (comp[v] < 0 && g.weight(u, v) > 0.0) {
          comp[v] = comp[s];
          stack.push_back(v);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

Eigen::MatrixX2d fr_component(const ConsensusGraph& g, const std::vector<std::size_t>& nodes, const FrOptions& o,
                              std::size_t stream) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixX2d pos(m, 2);
  if (m == 1) {
    pos.setZero();
    return pos;
  }
  const double k = fr_spring_length(nodes.size(), o);
  const double side = std::sqrt(o.area > 0.0 ? o.area : static_cast<double>(m));
  Rng rng(o.seed, stream);
  for (Eigen::Index i = 0; i < m; ++i) {
    pos(i, 0) = (rng.uniform() - 0.5) * side;
    pos(i, 1) = (rng.uniform() - 0.5) * side;
  }
  const double t0 = side / 10.0;
  Eigen::MatrixX2d disp(m, 2);
  for (std::size_t it = 0; it < o.iterations; ++it) {
    const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(o.iterations));
    disp.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i + 1; j < m; ++j) {
        Eigen::RowVector2d delta = pos.row(i) - pos.row(j);
        double d = delta.norm();
        if (d < 1e-9) {
          delta = Eigen::RowVector2d(1e-9 * static_cast<double>(j - i), 1e-9);
          d = delta.norm();
        }
        const double w = g.weight(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
        const double f = k * k / d - w * d * d / k;  // positive pushes apart
        const Eigen::RowVector2d step = delta / d * f;
        disp.row(i) += step;
        disp.row(j) -= step;
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      const double len = disp.row(i).norm();
      if (len > 0.0) pos.row(i) += disp.row(i) / len * std::min(len, temp);
    }
  }
  const Eigen::RowVector2d centre = pos.colwise().mean();
  pos.rowwise() -= centre;
  return pos;
}

}  // namespace

Layout2D layout_fr(const ConsensusGraph& graph, const FrOptions& options) {
  Layout2D out;
  out.points = Eigen::MatrixX2d::Zero(static_cast<Eigen::Index>(graph.nodes), 2);
  if (graph.nodes == 0) return out;
  const auto comps = components(graph);
  const double gap = fr_spring_length(graph.nodes, options);
  double x = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto pos = fr_component(graph, comps[c], options, c);
    const double lo = pos.col(0).minCoeff();
    const double hi = pos.col(0).maxCoeff();
    for (std::size_t i = 0; i < comps[c].size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      out.points(static_cast<Eigen::Index>(comps[c][i]), 0) = pos(r, 0) - lo + x;
      out.points(static_cast<Eigen::Index>(comps[c][i]), 1) = pos(r, 1);
    }
    x += hi - lo + gap;
  }
  // centre the bounding box
  const Eigen::RowVector2d mid = 0.5 * (out.points.colwise().minCoeff() + out.points.colwise().maxCoeff());
  out.points.rowwise() -= mid;
  return out;
}

Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& matrix, double perplexity,
                                       std::vector<double>& entropies) {
  const auto n = matrix.rows();
  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) d2(i, j) = (matrix.row(i) - matrix.row(j)).squaredNorm();
  }
  const double target = std::log(perplexity);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  entropies.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) dmin = std::min(dmin, d2(i, j));
    }
    // entropy of the row for precision beta; distances shifted by dmin for stability
    auto row_entropy = [&](double beta, Eigen::VectorXd& out) {
      double sum = 0.0, wsum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        out(j) = j == i ? 0.0 : std::exp(-beta * (d2(i, j) - dmin));
        sum += out(j);
        wsum += out(j) * (d2(i, j) - dmin);
      }
      out /= sum;
      return std::log(sum) + beta * wsum / sum;
    };
    Eigen::VectorXd row(n);
    double lo = 0.0, hi = std::numeric_limits<double>::infinity(), beta = 1.0;
    const double scale = (d2.row(i).sum() / static_cast<double>(n - 1)) - dmin;
    if (scale > 0.0) beta = 1.0 / scale;
    double h = row_entropy(beta, row);
    for (int it = 0; it < 200 && std::abs(h - target) > 1e-10; ++it) {
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      h = row_entropy(beta, row);
    }
    entropies[static_cast<std::size_t>(i)] = h;
    p.row(i) = row.transpose();
  }
  return p;
}

namespace {

Eigen::MatrixXd student_kernel(const Eigen::MatrixX2d& y, double& total) {
  const auto n = y.rows();
  Eigen::MatrixXd num(n, n);
  total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      num(i, j) = num(j, i) = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      total += 2.0 * num(i, j);
    }
  }
  return num;
}

}  // namespace

double tsne_kl(const Eigen::MatrixXd& p, const Eigen::MatrixX2d& y) {
  double z = 0.0;
  const Eigen::MatrixXd num = student_kernel(y, z);
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (i == j || p(i, j) <= 0.0) continue;
      const double q = std::max(num(i, j) / z, 1e-300);
      kl += p(i, j) * std::log(p(i, j) / q);
    }
  }
  return kl;
}

TsneResult tsne(const Eigen::MatrixXd& matrix, const TsneOptions& o) {
  const auto n = matrix.rows();
  const double bound = static_cast<double>(n - 1) / 3.0;
  if (!(o.perplexity > 1.0) || !(o.perplexity < bound)) {
    throw ParameterError("perplexity must satisfy 1 < perplexity < (n-1)/3 = " + std::to_string(bound));
  }
  TsneResult r;
  const Eigen::MatrixXd cond = conditional_affinities(matrix, o.perplexity, r.entropies);
  r.p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  r.p = r.p.cwiseMax(1e-12);
  r.p.diagonal().setZero();
  r.p /= r.p.sum();

  Rng rng(o.seed);
  Eigen::MatrixX2d y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i, 0) = 1e-4 * rng.normal();
    y(i, 1) = 1e-4 * rng.normal();
  }
  r.kl_initial = tsne_kl(r.p, y);

  Eigen::MatrixX2d velocity = Eigen::MatrixX2d::Zero(n, 2);
  Eigen::MatrixX2d gains = Eigen::MatrixX2d::Ones(n, 2);
  Eigen::MatrixX2d grad(n, 2);
  for (std::size_t it = 0; it < o.iterations; ++it) {
    const bool early = it < o.exaggeration_iterations;
    const double ex = early ? o.exaggeration : 1.0;
    const double momentum = early ? 0.5 : 0.8;
    double z = 0.0;
    const Eigen::MatrixXd num = student_kernel(y, z);
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mult = (ex * r.p(i, j) - num(i, j) / z) * num(i, j);
        grad.row(i) += 4.0 * mult * (y.row(i) - y.row(j));
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < 2; ++c) {
        const bool same = (grad(i, c) > 0.0) == (velocity(i, c) > 0.0);
        gains(i, c) = std::max(same ? gains(i, c) * 0.8 : gains(i, c) + 0.2, 0.01);
      }
    }
    velocity = momentum * velocity - o.learning_rate * gains.cwiseProduct(grad);
    y += velocity;
    const Eigen::RowVector2d centre = y.colwise().mean();
    y.rowwise() -= centre;
  }
  r.layout.points = y;
  r.kl = tsne_kl(r.p, y);
  return r;
}

}  // namespace elegy
