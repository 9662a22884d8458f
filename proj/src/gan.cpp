#include "brl/gan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "brl/conditioning.hpp"
#include "brl/error.hpp"
#include "brl/nn_kernels.hpp"

namespace brl::gan {

namespace {

constexpr double kInitStd = 0.02;

void require_unit_range(const Tensor& images, const char* what) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    const double v = images[i];
    if (!(v >= -1.0 && v <= 1.0)) {
      throw ValueError(std::string(what) + ": pixel value " + std::to_string(v) +
                       " outside [-1,1]");
    }
  }
}

ConvLayer make_conv(Rng& rng, std::size_t kh, std::size_t kw, std::size_t cin,
                    std::size_t cout, int stride, int pad) {
  ConvLayer l;
  l.w = gaussian_init(rng, {kh, kw, cin, cout}, kInitStd);
  l.b = Tensor::zeros({cout});
  l.stride = stride;
  l.pad = pad;
  return l;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in (0,1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must lie in (0,1)");
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (rank < 1) throw ConfigError("rank must be positive");
  if (depth < 1) throw ConfigError("depth must be at least 1");
  if (embed_dim == 0) throw ConfigError("embed dim must be positive");
  if (channels.size() != 3) throw ConfigError("expected three encoder channel counts");
  if (!d_channels.empty() && d_channels.size() != 2) {
    throw ConfigError("expected two discriminator channel counts");
  }
  if (static_cast<std::size_t>(rank) > std::min(channels.back(), embed_dim)) {
    throw ConfigError("rank " + std::to_string(rank) + " exceeds min(channels, embed_dim) = " +
                      std::to_string(std::min(channels.back(), embed_dim)));
  }
}

std::size_t sample_mismatch(const Dataset& data, std::size_t match_id, Rng& rng) {
  if (data.num_classes < 2) {
    throw ConfigError("sample_mismatch needs at least two attribute classes, dataset has " +
                      std::to_string(data.num_classes));
  }
  const std::size_t draw = rng.uniform_u64(data.num_classes - 1);
  return draw >= match_id ? draw + 1 : draw;
}

// ---- generator ---------------------------------------------------------------

Generator Generator::create(std::size_t image_size, std::size_t num_classes,
                            const TrainConfig& cfg, Rng& rng) {
  cfg.validate();
  if (image_size % 8 != 0) {
    throw ConfigError("image size must be divisible by 8, got " + std::to_string(image_size));
  }
  if (num_classes == 0) throw ConfigError("generator needs at least one attribute class");

  Generator g;
  g.image_size = image_size;
  g.num_classes = num_classes;
  g.embed_dim = cfg.embed_dim;

  const auto& ch = cfg.channels;
  g.encoder.push_back(make_conv(rng, 3, 3, 3, ch[0], 2, 1));
  g.encoder.push_back(make_conv(rng, 3, 3, ch[0], ch[1], 2, 1));
  g.encoder.push_back(make_conv(rng, 3, 3, ch[1], ch[2], 2, 1));

  g.embed = gaussian_init(rng, {num_classes, cfg.embed_dim}, kInitStd);

  for (int i = 0; i < cfg.depth; ++i) {
    FusingLayer f;
    f.u = gaussian_init(rng, {ch[2], static_cast<std::size_t>(cfg.rank)}, kInitStd);
    f.v = gaussian_init(rng, {cfg.embed_dim, static_cast<std::size_t>(cfg.rank)}, kInitStd);
    f.p = gaussian_init(rng, {ch[2], static_cast<std::size_t>(cfg.rank)}, kInitStd);
    g.fusing.push_back(std::move(f));
  }

  g.decoder.push_back(make_conv(rng, 3, 3, ch[2], ch[1], 1, 1));
  g.decoder.push_back(make_conv(rng, 3, 3, ch[1], ch[0], 1, 1));
  g.decoder.push_back(make_conv(rng, 3, 3, ch[0], 3, 1, 1));
  return g;
}

NamedParams Generator::parameters() {
  NamedParams out;
  for (std::size_t i = 0; i < encoder.size(); ++i) {
    out.emplace_back("g_enc" + std::to_string(i) + "_w", &encoder[i].w);
    out.emplace_back("g_enc" + std::to_string(i) + "_b", &encoder[i].b);
  }
  out.emplace_back("g_embed", &embed);
  for (std::size_t i = 0; i < fusing.size(); ++i) {
    out.emplace_back("g_fuse" + std::to_string(i) + "_u", &fusing[i].u);
    out.emplace_back("g_fuse" + std::to_string(i) + "_v", &fusing[i].v);
    out.emplace_back("g_fuse" + std::to_string(i) + "_p", &fusing[i].p);
  }
  for (std::size_t i = 0; i < decoder.size(); ++i) {
    out.emplace_back("g_dec" + std::to_string(i) + "_w", &decoder[i].w);
    out.emplace_back("g_dec" + std::to_string(i) + "_b", &decoder[i].b);
  }
  return out;
}

NamedParamsConst Generator::parameters() const {
  NamedParamsConst out;
  for (const auto& [name, t] : const_cast<Generator*>(this)->parameters()) {
    out.emplace_back(name, t);
  }
  return out;
}

Tensor Generator::forward(const Tensor& images, const std::vector<std::size_t>& edit_ids) const {
  if (images.rank() != 4 || images.dim(3) != 3 || images.dim(0) != edit_ids.size()) {
    throw ShapeError("generator input must be [N,H,W,3] with one id per image, got " +
                     images.shape_str() + " and " + std::to_string(edit_ids.size()) + " ids");
  }
  require_unit_range(images, "generator input");

  Tensor h = images;
  for (const ConvLayer& l : encoder) {
    h = nn::leaky_relu(nn::conv2d(h, l.w, l.b, l.stride, l.pad), kLeakySlope);
  }

  const std::size_t n = h.dim(0), hh = h.dim(1), ww = h.dim(2), d = h.dim(3);
  const std::size_t positions = hh * ww;
  Tensor flat = h.reshaped({n * positions, d});
  const Tensor cond = nn::gather_rows(embed, edit_ids);                    // [N, D']
  const Tensor cond_tiled = nn::repeat_rows(cond, positions);              // [N*hw, D']
  for (const FusingLayer& f : fusing) {
    const Tensor fu = matmul(flat, f.u);
    const Tensor cv = matmul(cond_tiled, f.v);
    const Tensor fused = matmul(hadamard(fu, cv), transpose(f.p));
    flat = nn::leaky_relu(add(flat, fused), kLeakySlope);
  }
  h = flat.reshaped({n, hh, ww, d});

  for (std::size_t i = 0; i < decoder.size(); ++i) {
    h = nn::upsample2x(h);
    h = nn::conv2d(h, decoder[i].w, decoder[i].b, decoder[i].stride, decoder[i].pad);
    h = i + 1 < decoder.size() ? nn::leaky_relu(h, kLeakySlope) : nn::tanh_map(h);
  }
  return h;
}

Tensor Generator::forward_one(const Tensor& image, std::size_t edit_id) const {
  const Tensor batch = image.reshaped({1, image.dim(0), image.dim(1), image.dim(2)});
  const Tensor out = forward(batch, {edit_id});
  return out.reshaped({image.dim(0), image.dim(1), image.dim(2)});
}

// ---- discriminator -----------------------------------------------------------

Discriminator Discriminator::create(std::size_t image_size, std::size_t num_classes,
                                    const TrainConfig& cfg, Rng& rng) {
  cfg.validate();
  if (image_size % 8 != 0) {
    throw ConfigError("image size must be divisible by 8, got " + std::to_string(image_size));
  }
  Discriminator d;
  d.image_size = image_size;
  d.num_classes = num_classes;
  d.embed_dim = cfg.embed_dim;
  d.squash = cfg.squash_output;

  const std::vector<std::size_t> ch =
      cfg.d_channels.empty() ? std::vector<std::size_t>{cfg.channels[0], cfg.channels[1]}
                             : cfg.d_channels;
  d.encoder.push_back(make_conv(rng, 3, 3, 3, ch[0], 2, 1));
  d.encoder.push_back(make_conv(rng, 3, 3, ch[0], ch[1], 2, 1));
  d.embed = gaussian_init(rng, {num_classes, cfg.embed_dim}, kInitStd);
  d.head.push_back(make_conv(rng, 3, 3, ch[1] + cfg.embed_dim, ch[1], 2, 1));
  const std::size_t final_extent = image_size / 8;
  d.head.push_back(make_conv(rng, final_extent, final_extent, ch[1], 1, 1, 0));
  return d;
}

NamedParams Discriminator::parameters() {
  NamedParams out;
  for (std::size_t i = 0; i < encoder.size(); ++i) {
    out.emplace_back("d_enc" + std::to_string(i) + "_w", &encoder[i].w);
    out.emplace_back("d_enc" + std::to_string(i) + "_b", &encoder[i].b);
  }
  out.emplace_back("d_embed", &embed);
  for (std::size_t i = 0; i < head.size(); ++i) {
    out.emplace_back("d_head" + std::to_string(i) + "_w", &head[i].w);
    out.emplace_back("d_head" + std::to_string(i) + "_b", &head[i].b);
  }
  return out;
}

NamedParamsConst Discriminator::parameters() const {
  NamedParamsConst out;
  for (const auto& [name, t] : const_cast<Discriminator*>(this)->parameters()) {
    out.emplace_back(name, t);
  }
  return out;
}

Tensor Discriminator::forward(const Tensor& images,
                              const std::vector<std::size_t>& attr_ids) const {
  if (images.rank() != 4 || images.dim(0) != attr_ids.size()) {
    throw ShapeError("discriminator input must be [N,H,W,3] with one id per image");
  }
  Tensor h = images;
  for (const ConvLayer& l : encoder) {
    h = nn::leaky_relu(nn::conv2d(h, l.w, l.b, l.stride, l.pad), kLeakySlope);
  }
  const std::size_t n = h.dim(0), hh = h.dim(1), ww = h.dim(2);
  const Tensor cond = nn::gather_rows(embed, attr_ids);
  const Tensor cond_map =
      nn::repeat_rows(cond, hh * ww).reshaped({n, hh, ww, embed_dim});
  h = nn::concat_last(h, cond_map);
  h = nn::leaky_relu(nn::conv2d(h, head[0].w, head[0].b, head[0].stride, head[0].pad),
                     kLeakySlope);
  h = nn::conv2d(h, head[1].w, head[1].b, head[1].stride, head[1].pad);
  Tensor score = h.reshaped({n});
  return squash ? nn::sigmoid(score) : score;
}

// ---- losses ------------------------------------------------------------------

double lsgan_discriminator_loss(const Tensor& p_mismatch, const Tensor& p_match,
                                const Tensor& p_fake) {
  if (p_mismatch.size() == 0 || !p_mismatch.same_shape(p_match) ||
      !p_mismatch.same_shape(p_fake)) {
    throw ShapeError("loss inputs must be equal-length non-empty score vectors");
  }
  const double n = static_cast<double>(p_mismatch.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p_mismatch.size(); ++i) {
    acc += p_mismatch[i] * p_mismatch[i];
    acc += (p_match[i] - 1.0) * (p_match[i] - 1.0);
    acc += p_fake[i] * p_fake[i];
  }
  return acc / n;
}

double lsgan_generator_loss(const Tensor& p_fake) {
  if (p_fake.size() == 0) throw ShapeError("loss input must be non-empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < p_fake.size(); ++i) {
    acc += (p_fake[i] - 1.0) * (p_fake[i] - 1.0);
  }
  return acc / static_cast<double>(p_fake.size());
}

namespace {

struct BatchViews {
  Tensor images;
  std::vector<std::size_t> match, edit, mismatch;
};

BatchViews gather_batch(const std::vector<SamplePair>& batch) {
  if (batch.empty()) throw ValueError("batch must be non-empty");
  BatchViews v;
  std::vector<std::size_t> all(batch.size());
  std::iota(all.begin(), all.end(), 0);
  v.images = stack_images(batch, all);
  for (const SamplePair& s : batch) {
    v.match.push_back(s.match_id);
    v.edit.push_back(s.edit_id);
    v.mismatch.push_back(s.mismatch_id);
  }
  return v;
}

}  // namespace

double discriminator_loss(const Discriminator& d, const Generator& g,
                          const std::vector<SamplePair>& batch) {
  const BatchViews v = gather_batch(batch);
  const Tensor fake = g.forward(v.images, v.edit);
  return lsgan_discriminator_loss(d.forward(v.images, v.mismatch),
                                  d.forward(v.images, v.match), d.forward(fake, v.edit));
}

double generator_loss(const Discriminator& d, const Generator& g,
                      const std::vector<SamplePair>& batch) {
  const BatchViews v = gather_batch(batch);
  const Tensor fake = g.forward(v.images, v.edit);
  return lsgan_generator_loss(d.forward(fake, v.edit));
}

// ---- tape graphs ---------------------------------------------------------------

Binding bind_generator(ad::Tape& tape, const Generator& g, bool trainable) {
  Binding b;
  for (const auto& [name, t] : g.parameters()) {
    b.ids.push_back(trainable ? tape.param(*t, name) : tape.constant(*t, name));
  }
  return b;
}

Binding bind_discriminator(ad::Tape& tape, const Discriminator& d, bool trainable) {
  Binding b;
  for (const auto& [name, t] : d.parameters()) {
    b.ids.push_back(trainable ? tape.param(*t, name) : tape.constant(*t, name));
  }
  return b;
}

ad::NodeId generator_graph(ad::Tape& tape, const Generator& g, const Binding& bind,
                           ad::NodeId images, const std::vector<std::size_t>& edit_ids) {
  std::size_t at = 0;
  const auto next = [&]() { return bind.ids.at(at++); };

  ad::NodeId h = images;
  for (const ConvLayer& l : g.encoder) {
    const auto w = next();
    const auto b = next();
    h = tape.leaky_relu(tape.conv2d(h, w, b, l.stride, l.pad), kLeakySlope);
  }
  const auto embed = next();

  const std::vector<std::size_t> hshape = tape.value(h).shape();
  const std::size_t n = hshape[0], positions = hshape[1] * hshape[2], d = hshape[3];
  ad::NodeId flat = tape.reshape(h, {n * positions, d});
  const auto cond = tape.gather_rows(embed, edit_ids);
  const auto cond_tiled = tape.repeat_rows(cond, positions);
  for (std::size_t i = 0; i < g.fusing.size(); ++i) {
    const auto u = next();
    const auto v = next();
    const auto p = next();
    const auto fu = tape.matmul(flat, u);
    const auto cv = tape.matmul(cond_tiled, v);
    const auto fused = tape.matmul(tape.mul(fu, cv), tape.transpose(p));
    flat = tape.leaky_relu(tape.add(flat, fused), kLeakySlope);
  }
  h = tape.reshape(flat, {n, hshape[1], hshape[2], d});

  for (std::size_t i = 0; i < g.decoder.size(); ++i) {
    const auto w = next();
    const auto b = next();
    h = tape.upsample2x(h);
    h = tape.conv2d(h, w, b, g.decoder[i].stride, g.decoder[i].pad);
    h = i + 1 < g.decoder.size() ? tape.leaky_relu(h, kLeakySlope) : tape.tanh(h);
  }
  return h;
}

ad::NodeId discriminator_graph(ad::Tape& tape, const Discriminator& d, const Binding& bind,
                               ad::NodeId images, const std::vector<std::size_t>& attr_ids) {
  std::size_t at = 0;
  const auto next = [&]() { return bind.ids.at(at++); };

  ad::NodeId h = images;
  for (const ConvLayer& l : d.encoder) {
    const auto w = next();
    const auto b = next();
    h = tape.leaky_relu(tape.conv2d(h, w, b, l.stride, l.pad), kLeakySlope);
  }
  const auto embed = next();

  const std::vector<std::size_t> hshape = tape.value(h).shape();
  const std::size_t n = hshape[0], hh = hshape[1], ww = hshape[2];
  const auto cond = tape.gather_rows(embed, attr_ids);
  const auto cond_map =
      tape.reshape(tape.repeat_rows(cond, hh * ww), {n, hh, ww, d.embed_dim});
  h = tape.concat_last(h, cond_map);
  {
    const auto w = next();
    const auto b = next();
    h = tape.leaky_relu(tape.conv2d(h, w, b, d.head[0].stride, d.head[0].pad), kLeakySlope);
  }
  {
    const auto w = next();
    const auto b = next();
    h = tape.conv2d(h, w, b, d.head[1].stride, d.head[1].pad);
  }
  ad::NodeId score = tape.reshape(h, {n});
  return d.squash ? tape.sigmoid(score) : score;
}

// ---- optimizer -----------------------------------------------------------------

void adam_step(Tensor& param, const Tensor& grad, AdamState& state, double learning_rate,
               double beta1, double beta2, double epsilon) {
  if (!param.same_shape(grad)) {
    throw ShapeError("adam_step: parameter " + param.shape_str() + " vs gradient " +
                     grad.shape_str());
  }
  if (state.step == 0) {
    state.m = Tensor::zeros(param.shape());
    state.v = Tensor::zeros(param.shape());
  }
  if (!state.m.same_shape(param)) {
    throw ShapeError("adam_step: state " + state.m.shape_str() + " vs parameter " +
                     param.shape_str());
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    param[i] -= learning_rate * mhat / (std::sqrt(vhat) + epsilon);
  }
}

// ---- training --------------------------------------------------------------------

Tensor stack_images(const std::vector<SamplePair>& samples,
                    const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw ValueError("stack_images: empty index list");
  const Tensor& first = samples.at(indices[0]).image;
  const std::size_t h = first.dim(0), w = first.dim(1), c = first.dim(2);
  Tensor out({indices.size(), h, w, c});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Tensor& img = samples.at(indices[i]).image;
    if (img.size() != h * w * c) {
      throw ShapeError("stack_images: inconsistent image shapes in dataset");
    }
    std::copy(img.data(), img.data() + img.size(), out.data() + i * h * w * c);
  }
  return out;
}

namespace {

struct OptStates {
  std::vector<AdamState> states;
};

void check_loss_finite(double loss, const char* which, int epoch, const ad::Tape& tape) {
  if (!std::isfinite(loss)) {
    throw NumericError(std::string(which) + " loss is non-finite at epoch " +
                       std::to_string(epoch) + "; first non-finite tensor: " +
                       tape.first_non_finite());
  }
}

template <typename Net>
void apply_grads(Net& net, const Binding& bind, const ad::GradMap& grads, OptStates& opt,
                 const TrainConfig& cfg) {
  auto params = net.parameters();
  if (opt.states.empty()) opt.states.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto it = grads.find(bind.ids[i]);
    if (it == grads.end()) continue;
    adam_step(*params[i].second, it->second, opt.states[i], cfg.learning_rate, cfg.beta1,
              cfg.beta2);
  }
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const Dataset& data, const TrainHooks& hooks) {
  cfg.validate();
  if (data.samples.empty()) throw ValueError("train: dataset is empty");
  if (data.num_classes < 2) throw ConfigError("train: need at least two attribute classes");

  const std::size_t image_size = data.samples.front().image.dim(0);
  Rng g_rng(Rng::derive_seed(cfg.seed, 1));
  Rng d_rng(Rng::derive_seed(cfg.seed, 2));
  Rng shuffle_rng(Rng::derive_seed(cfg.seed, 3));

  TrainResult result{Generator::create(image_size, data.num_classes, cfg, g_rng),
                     Discriminator::create(image_size, data.num_classes, cfg, d_rng),
                     {}};
  OptStates g_opt, d_opt;

  std::vector<std::size_t> order(data.samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    // Fisher-Yates with the dedicated shuffle stream.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = shuffle_rng.uniform_u64(i);
      std::swap(order[i - 1], order[j]);
    }

    double epoch_loss_d = 0.0, epoch_loss_g = 0.0;
    std::size_t seen = 0;

    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      const std::vector<std::size_t> batch_idx(order.begin() + begin, order.begin() + end);
      const std::size_t bsize = batch_idx.size();

      Tensor images = stack_images(data.samples, batch_idx);
      std::vector<std::size_t> match, edit, mismatch;
      for (std::size_t idx : batch_idx) {
        match.push_back(data.samples[idx].match_id);
        edit.push_back(data.samples[idx].edit_id);
        mismatch.push_back(data.samples[idx].mismatch_id);
      }

      // Discriminator step; fakes are constants here.
      const Tensor fake = result.generator.forward(images, edit);
      {
        ad::Tape tape;
        const Binding dbind = bind_discriminator(tape, result.discriminator, true);
        const auto x = tape.constant(images, "batch_images");
        const auto xf = tape.constant(fake, "fake_images");
        const auto p_neg = discriminator_graph(tape, result.discriminator, dbind, x, mismatch);
        const auto p_pos = discriminator_graph(tape, result.discriminator, dbind, x, match);
        const auto p_fake = discriminator_graph(tape, result.discriminator, dbind, xf, edit);
        const auto loss =
            tape.add(tape.add(tape.mean(tape.mul(p_neg, p_neg)),
                              tape.mean(tape.mul(tape.add_scalar(p_pos, -1.0),
                                                 tape.add_scalar(p_pos, -1.0)))),
                     tape.mean(tape.mul(p_fake, p_fake)));
        const double loss_d = tape.value(loss)[0];
        check_loss_finite(loss_d, "discriminator", epoch, tape);
        if (loss_d < 0.0) throw NumericError("discriminator loss negative");
        const auto grads = tape.backward(loss);
        apply_grads(result.discriminator, dbind, grads, d_opt, cfg);
        epoch_loss_d += loss_d * static_cast<double>(bsize);
      }

      // Generator step; discriminator parameters stay constant.
      {
        ad::Tape tape;
        const Binding gbind = bind_generator(tape, result.generator, true);
        const Binding dbind = bind_discriminator(tape, result.discriminator, false);
        const auto x = tape.constant(images, "batch_images");
        const auto fake2 = generator_graph(tape, result.generator, gbind, x, edit);
        const auto p = discriminator_graph(tape, result.discriminator, dbind, fake2, edit);
        const auto err = tape.add_scalar(p, -1.0);
        const auto loss = tape.mean(tape.mul(err, err));
        const double loss_g = tape.value(loss)[0];
        check_loss_finite(loss_g, "generator", epoch, tape);
        if (loss_g < 0.0) throw NumericError("generator loss negative");
        const auto grads = tape.backward(loss);
        apply_grads(result.generator, gbind, grads, g_opt, cfg);
        epoch_loss_g += loss_g * static_cast<double>(bsize);
      }
      seen += bsize;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss_d = epoch_loss_d / static_cast<double>(seen);
    stats.loss_g = epoch_loss_g / static_cast<double>(seen);
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(stats);
    if (hooks.on_epoch) hooks.on_epoch(stats);
    if (hooks.on_checkpoint && cfg.checkpoint_every > 0 && epoch % cfg.checkpoint_every == 0 &&
        epoch != cfg.epochs) {
      hooks.on_checkpoint(epoch, result.generator, result.discriminator);
    }
  }

  if (hooks.on_checkpoint) {
    hooks.on_checkpoint(cfg.epochs, result.generator, result.discriminator);
  }
  return result;
}

}  // namespace brl::gan
