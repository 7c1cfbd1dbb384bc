#include "tgsketch/stitching.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tgsketch/errors.hpp"
#include "tgsketch/rng.hpp"

namespace tgsketch {

void PairDataset::add_row(std::span<const double> x, int label) {
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
  rows++;
}

PairDataset build_pair_dataset(const SketchMatrix& z,
                               const std::vector<std::pair<node_id, node_id>>& pairs,
                               const std::vector<int>& labels, bool both_orders) {
  PairDataset data;
  const int k = z.total_bits();
  data.feature_dim = 2 * static_cast<std::size_t>(k);
  std::vector<double> x(data.feature_dim);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (int order = 0; order < (both_orders ? 2 : 1); ++order) {
      auto [u, v] = pairs[i];
      if (order) std::swap(u, v);
      for (int b = 0; b < k; ++b) {
        x[b] = z.get(u, b) ? 1.0 : 0.0;
        x[k + b] = z.get(v, b) ? 1.0 : 0.0;
      }
      data.add_row(x, labels[i]);
    }
  }
  return data;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(m)) without overflow.
double log1pexp(double m) { return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m)); }

}  // namespace

double LogisticModel::score(std::span<const double> x) const {
  double z = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
  return sigmoid(z);
}

double logistic_objective(const PairDataset& data, std::span<const double> weights, double bias,
                          double lambda, std::vector<double>* grad) {
  const std::size_t n = data.rows;
  const std::size_t d = data.feature_dim;
  if (grad) grad->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = data.row(i);
    double z = bias;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * x[j];
    const double y = data.labels[i] ? 1.0 : 0.0;
    loss += log1pexp(data.labels[i] ? -z : z);
    if (grad) {
      const double err = sigmoid(z) - y;
      for (std::size_t j = 0; j < d; ++j) (*grad)[j] += err * x[j];
      (*grad)[d] += err;
    }
  }
  loss /= static_cast<double>(n);
  const double reg_coeff = 1.0 / (2.0 * lambda * static_cast<double>(n));
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  loss += reg_coeff * reg;
  if (grad) {
    for (std::size_t j = 0; j <= d; ++j) (*grad)[j] /= static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) (*grad)[j] += 2.0 * reg_coeff * weights[j];
  }
  return loss;
}

LogisticModel train_logistic(const PairDataset& data, double lambda, double tol, int max_iter) {
  if (data.rows == 0) throw validation_error("empty training set");
  if (lambda <= 0.0) throw validation_error("regularization strength must be positive");
  const bool has_pos = std::find(data.labels.begin(), data.labels.end(), 1) != data.labels.end();
  const bool has_neg = std::find(data.labels.begin(), data.labels.end(), 0) != data.labels.end();
  if (!has_pos || !has_neg) throw validation_error("training set must contain both classes");

  LogisticModel model;
  model.lambda = lambda;
  model.tol = tol;
  model.weights.assign(data.feature_dim, 0.0);

  std::vector<double> grad;
  double loss = logistic_objective(data, model.weights, model.bias, lambda, &grad);
  double step = 1.0;
  std::vector<double> trial_w(data.feature_dim);

  for (int iter = 0; iter < max_iter; ++iter) {
    double grad_max = 0.0;
    double grad_norm2 = 0.0;
    for (double gj : grad) {
      grad_max = std::max(grad_max, std::abs(gj));
      grad_norm2 += gj * gj;
    }
    model.iterations = iter;
    if (grad_max < tol) break;

    // Backtracking line search (Armijo, c = 1e-4).
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      for (std::size_t j = 0; j < data.feature_dim; ++j)
        trial_w[j] = model.weights[j] - step * grad[j];
      const double trial_b = model.bias - step * grad[data.feature_dim];
      const double trial_loss = logistic_objective(data, trial_w, trial_b, lambda, nullptr);
      if (trial_loss <= loss - 1e-4 * step * grad_norm2) {
        model.weights.swap(trial_w);
        model.bias = trial_b;
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow; gradient is numerically flat
    loss = logistic_objective(data, model.weights, model.bias, lambda, &grad);
  }
  model.trained = true;
  return model;
}

std::vector<double> predict_scores(const LogisticModel& model, const PairDataset& data) {
  if (!model.trained) throw std::logic_error("model is not trained");
  if (data.feature_dim != model.weights.size())
    throw validation_error("pair feature width does not match the model");
  std::vector<double> scores(data.rows);
  for (std::size_t i = 0; i < data.rows; ++i) scores[i] = model.score(data.row(i));
  return scores;
}

std::vector<int> predict_labels(const std::vector<double>& scores, double threshold) {
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] >= threshold ? 1 : 0;
  return labels;
}

BucketTable build_buckets(const SketchMatrix& z, int band_bits, std::uint64_t seed) {
  const auto& segments = z.segment_bits();
  if (band_bits < 1) throw validation_error("band bits must be >= 1");
  for (int k_dt : segments)
    if (band_bits > k_dt)
      throw validation_error("band bits exceed the smallest sketch segment (" +
                             std::to_string(k_dt) + ")");

  BucketTable table;
  table.band_bits = band_bits;
  table.seed = seed;
  table.positions.resize(segments.size());
  table.sigs.resize(segments.size());
  table.buckets.resize(segments.size());

  for (std::size_t band = 0; band < segments.size(); ++band) {
    // Sample band_bits distinct positions inside this distance's segment.
    const int offset = z.segment_offset(band);
    std::vector<int> all(segments[band]);
    for (int i = 0; i < segments[band]; ++i) all[i] = offset + i;
    rng_engine rng(derive_seed(seed, band, 0x62616e64ULL));  // "band"
    for (int i = 0; i < band_bits; ++i) {
      std::size_t j = i + uniform_index(rng, all.size() - i);
      std::swap(all[i], all[j]);
    }
    table.positions[band].assign(all.begin(), all.begin() + band_bits);

    auto& sigs = table.sigs[band];
    sigs.resize(z.num_nodes());
    for (node_id u = 0; u < z.num_nodes(); ++u) {
      std::string sig(band_bits, '0');
      for (int i = 0; i < band_bits; ++i)
        if (z.get(u, table.positions[band][i])) sig[i] = '1';
      table.buckets[band][sig].push_back(u);
      sigs[u] = std::move(sig);
    }
  }
  return table;
}

bool co_bucketed(const BucketTable& table, node_id u, node_id v) {
  if (u >= table.num_nodes() || v >= table.num_nodes())
    throw std::out_of_range("node id out of range for bucket table");
  for (std::size_t band = 0; band < table.sigs.size(); ++band)
    if (table.sigs[band][u] == table.sigs[band][v]) return true;
  return false;
}

std::vector<int> stitch_unsupervised(const BucketTable& table,
                                     const std::vector<std::pair<node_id, node_id>>& queries) {
  std::vector<int> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    out[i] = co_bucketed(table, queries[i].first, queries[i].second) ? 1 : 0;
  return out;
}

std::vector<std::pair<node_id, node_id>> candidate_pairs(const BucketTable& table) {
  std::set<std::pair<node_id, node_id>> pairs;
  for (const auto& band : table.buckets) {
    for (const auto& [sig, members] : band) {
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          pairs.emplace(std::min(members[i], members[j]), std::max(members[i], members[j]));
    }
  }
  return {pairs.begin(), pairs.end()};
}

}  // namespace tgsketch
