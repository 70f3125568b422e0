#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace elegy {

enum class Metric { Cosine, Euclidean };

Metric parse_metric(const std::string& name);

struct Edge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0.0;
};

struct ConsensusGraph {
  std::size_t nodes = 0;
  Eigen::MatrixXd weights;  // symmetric, zero diagonal, entries below the threshold zeroed
  std::vector<Edge> edges;  // nonzero entries of `weights`, by (a, b)

  double weight(std::size_t i, std::size_t j) const {
    return weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

struct ConsensusOptions {
  std::size_t subsets = 500;
  std::size_t subset_size = 15;
  std::size_t k = 3;
  Metric metric = Metric::Cosine;
  double threshold = 0.05;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Feature columns drawn for subset `s`; subset draws depend only on (seed, s).
std::vector<std::size_t> consensus_subset(std::size_t features, const ConsensusOptions& options, std::size_t s);

/// Indices of the k nearest rows to `row` (itself excluded) over `columns`,
/// ties broken by lower index.
std::vector<std::size_t> nearest_neighbours(const Eigen::MatrixXd& matrix, std::size_t row,
                                            const std::vector<std::size_t>& columns, std::size_t k, Metric metric);

ConsensusGraph consensus_graph(const Eigen::MatrixXd& matrix, const ConsensusOptions& options = {});

struct Layout2D {
  Eigen::MatrixX2d points;  // one row per node
};

struct FrOptions {
  std::size_t iterations = 500;
  std::uint64_t seed = 1;
  double c = 1.0;
  double area = 0.0;  // 0: one unit per node
};

/// Ideal edge length C * sqrt(area / n).
double fr_spring_length(std::size_t n, const FrOptions& options);

/// Potential whose negative gradient is the FR force field (weighted cubic
/// attraction, logarithmic repulsion) for spring length k.
double fr_energy(const ConsensusGraph& graph, const Layout2D& layout, double k);

Layout2D layout_fr(const ConsensusGraph& graph, const FrOptions& options = {});

struct TsneOptions {
  double perplexity = 10.0;
  std::size_t iterations = 1000;
  double exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  double learning_rate = 200.0;
  std::uint64_t seed = 1;
};

struct TsneResult {
  Layout2D layout;
  std::vector<double> entropies;  // achieved conditional entropy per point (nats)
  Eigen::MatrixXd p;              // symmetrized joint affinities
  double kl_initial = 0.0;
  double kl = 0.0;
};

/// Conditional affinities p_{j|i} with bandwidths searched to match the
/// perplexity; `entropies` receives the achieved entropy per row.
Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& matrix, double perplexity,
                                       std::vector<double>& entropies);

double tsne_kl(const Eigen::MatrixXd& p, const Eigen::MatrixX2d& y);

TsneResult tsne(const Eigen::MatrixXd& matrix, const TsneOptions& options = {});

}  // namespace elegy
