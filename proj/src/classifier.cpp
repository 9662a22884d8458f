#include "brl/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "brl/error.hpp"
#include "brl/nn_kernels.hpp"

namespace brl::data {

namespace {

constexpr double kSlope = 0.2;

Tensor logits_plain(const ClassifierModel& m, const Tensor& images) {
  Tensor h = nn::leaky_relu(nn::conv2d(images, m.conv1.w, m.conv1.b, 2, 1), kSlope);
  h = nn::leaky_relu(nn::conv2d(h, m.conv2.w, m.conv2.b, 2, 1), kSlope);
  const std::size_t n = h.dim(0);
  const std::size_t flat = h.size() / n;
  const Tensor logits = matmul(h.reshaped({n, flat}), m.dense_w);
  Tensor out(logits.shape());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m.dense_b.size(); ++j) {
      out(i, j) = logits(i, j) + m.dense_b[j];
    }
  }
  return out;
}

double accuracy_on(const ClassifierModel& m, const gan::Dataset& data) {
  std::vector<std::size_t> idx(data.samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  const Tensor images = gan::stack_images(data.samples, idx);
  const Tensor logits = logits_plain(m, images);
  std::size_t hits = 0;
  const std::size_t c = logits.dim(1);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < c; ++j) {
      if (logits(i, j) > logits(i, arg)) arg = j;
    }
    if (arg == data.samples[i].match_id) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(idx.size());
}

}  // namespace

Tensor ClassifierModel::posteriors(const Tensor& images) const {
  return nn::softmax_rows(logits_plain(*this, images));
}

std::size_t ClassifierModel::predict(const Tensor& image) const {
  const Tensor batch = image.reshaped({1, image.dim(0), image.dim(1), image.dim(2)});
  const Tensor p = posteriors(batch);
  std::size_t arg = 0;
  for (std::size_t j = 1; j < num_classes; ++j) {
    if (p(0, j) > p(0, arg)) arg = j;
  }
  return arg;
}

ClassifierModel train_classifier(const gan::Dataset& data, const ClassifierOptions& opts) {
  if (data.num_classes < 2) {
    throw ConfigError("train_classifier: need at least two classes, got " +
                      std::to_string(data.num_classes));
  }
  if (data.samples.empty()) throw ValueError("train_classifier: dataset is empty");

  const std::size_t size = data.samples.front().image.dim(0);
  Rng rng(Rng::derive_seed(opts.seed, 11));

  ClassifierModel m;
  m.image_size = size;
  m.num_classes = data.num_classes;
  m.conv1 = {gaussian_init(rng, {3, 3, 3, 8}, 0.05), Tensor::zeros({8}), 2, 1};
  m.conv2 = {gaussian_init(rng, {3, 3, 8, 16}, 0.05), Tensor::zeros({16}), 2, 1};
  const std::size_t flat = (size / 4) * (size / 4) * 16;
  m.dense_w = gaussian_init(rng, {flat, data.num_classes}, 0.05);
  m.dense_b = Tensor::zeros({data.num_classes});

  std::vector<gan::AdamState> states(6);
  std::vector<std::size_t> order(data.samples.size());
  std::iota(order.begin(), order.end(), 0);

  double acc = 0.0;
  for (int epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = rng.uniform_u64(i);
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(opts.batch_size));
      const std::vector<std::size_t> batch(order.begin() + begin, order.begin() + end);
      const Tensor images = gan::stack_images(data.samples, batch);
      std::vector<std::size_t> labels;
      for (std::size_t idx : batch) labels.push_back(data.samples[idx].match_id);

      ad::Tape tape;
      const auto w1 = tape.param(m.conv1.w);
      const auto b1 = tape.param(m.conv1.b);
      const auto w2 = tape.param(m.conv2.w);
      const auto b2 = tape.param(m.conv2.b);
      const auto dw = tape.param(m.dense_w);
      const auto db = tape.param(m.dense_b);

      auto h = tape.leaky_relu(tape.conv2d(tape.constant(images), w1, b1, 2, 1), kSlope);
      h = tape.leaky_relu(tape.conv2d(h, w2, b2, 2, 1), kSlope);
      const std::size_t n = batch.size();
      h = tape.reshape(h, {n, flat});
      const auto logits =
          tape.add(tape.matmul(h, dw), tape.repeat_rows(tape.reshape(db, {1, m.num_classes}), n));
      const auto loss = tape.softmax_cross_entropy(logits, labels);
      const auto grads = tape.backward(loss);

      Tensor* targets[6] = {&m.conv1.w, &m.conv1.b, &m.conv2.w,
                            &m.conv2.b, &m.dense_w, &m.dense_b};
      const ad::NodeId ids[6] = {w1, b1, w2, b2, dw, db};
      for (int k = 0; k < 6; ++k) {
        const auto it = grads.find(ids[k]);
        if (it == grads.end()) continue;
        gan::adam_step(*targets[k], it->second, states[k], opts.learning_rate, 0.9, 0.999);
      }
    }
    acc = accuracy_on(m, data);
    if (acc >= opts.stop_accuracy) break;
  }

  if (acc < opts.target_accuracy) {
    throw TrainingError("classifier failed to reach target accuracy " +
                        std::to_string(opts.target_accuracy) + "; final accuracy " +
                        std::to_string(acc));
  }
  return m;
}

double conditioning_accuracy(const gan::Generator& g, const ClassifierModel& clf,
                             const gan::Dataset& data) {
  if (data.samples.empty()) throw ValueError("conditioning_accuracy: dataset is empty");
  std::vector<std::size_t> idx(data.samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  const Tensor images = gan::stack_images(data.samples, idx);
  std::vector<std::size_t> edits;
  for (const auto& s : data.samples) edits.push_back(s.edit_id);
  const Tensor edited = g.forward(images, edits);
  const Tensor p = clf.posteriors(edited);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < clf.num_classes; ++j) {
      if (p(i, j) > p(i, arg)) arg = j;
    }
    if (arg == edits[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(idx.size());
}

}  // namespace brl::data
