/*
 * Copyright 2026 The intentrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "intentrec/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "intentrec/error.hpp"

namespace intentrec::nn {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense: return "Dense";
    case LayerKind::kConv1D: return "Conv1D";
    case LayerKind::kBiLSTM: return "BiLSTM";
    case LayerKind::kDropout: return "Dropout";
    case LayerKind::kReLU: return "ReLU";
    case LayerKind::kSoftmax: return "Softmax";
    case LayerKind::kFlatten: return "Flatten";
    case LayerKind::kConcat: return "Concat";
  }
  return "?";
}

void Layer::shape_error(const Shape& expected, const Shape& got) const {
  throw ShapeError("layer '" + name_ + "' (" + std::string(to_string(kind())) +
                   ") expects input " + shape_to_string(expected) + ", got " +
                   shape_to_string(got));
}

void Layer::missing_forward() const {
  throw std::logic_error("layer '" + name_ +
                         "': backward called without a preceding forward");
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::string name, std::size_t d_in, std::size_t d_out)
    : Layer(std::move(name)),
      d_in_(d_in),
      d_out_(d_out),
      weights_(this->name() + ".weights", Tensor({d_in, d_out})),
      bias_(this->name() + ".bias", Tensor({d_out})) {}

Shape Dense::output_shape(const Shape& input) const {
  if (input != Shape{d_in_}) shape_error({d_in_}, input);
  return {d_out_};
}

Tensor Dense::infer(const Tensor& input) const {
  output_shape(input.shape());
  Tensor out = bias_.value;
  const double* w = weights_.value.data();
  for (std::size_t i = 0; i < d_in_; ++i) {
    const double xi = input[i];
    if (xi == 0.0) continue;
    const double* wr = w + i * d_out_;
    for (std::size_t o = 0; o < d_out_; ++o) out[o] += xi * wr[o];
  }
  return out;
}

Tensor Dense::forward(const Tensor& input, Mode) {
  Tensor out = infer(input);
  input_ = input;
  return out;
}

Tensor Dense::backward(const Tensor& upstream) {
  if (!input_) missing_forward();
  if (upstream.shape() != Shape{d_out_}) shape_error({d_out_}, upstream.shape());
  const Tensor& x = *input_;
  Tensor dx({d_in_});
  const double* w = weights_.value.data();
  double* dw = weights_.grad.data();
  for (std::size_t i = 0; i < d_in_; ++i) {
    const double xi = x[i];
    const double* wr = w + i * d_out_;
    double* dwr = dw + i * d_out_;
    double acc = 0.0;
    for (std::size_t o = 0; o < d_out_; ++o) {
      dwr[o] += xi * upstream[o];
      acc += wr[o] * upstream[o];
    }
    dx[i] = acc;
  }
  for (std::size_t o = 0; o < d_out_; ++o) bias_.grad[o] += upstream[o];
  input_.reset();
  return dx;
}

// ---------------------------------------------------------------- Conv1D

Conv1D::Conv1D(std::string name, std::size_t kernel_size, std::size_t d_in,
               std::size_t filters)
    : Layer(std::move(name)),
      k_(kernel_size),
      d_in_(d_in),
      c_(filters),
      kernel_(this->name() + ".kernel", Tensor({kernel_size, d_in, filters})),
      bias_(this->name() + ".bias", Tensor({filters})) {
  if (k_ == 0 || c_ == 0) throw ShapeError("Conv1D '" + this->name() + "': zero kernel or filters");
}

Shape Conv1D::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] != d_in_ || input[0] < k_) {
    throw ShapeError("layer '" + name() + "' (Conv1D, k=" + std::to_string(k_) +
                     ") expects input (L >= " + std::to_string(k_) + ", " +
                     std::to_string(d_in_) + "), got " + shape_to_string(input));
  }
  return {input[0] - k_ + 1, c_};
}

Tensor Conv1D::infer(const Tensor& input) const {
  const Shape out_shape = output_shape(input.shape());
  const std::size_t steps = out_shape[0];
  Tensor out(out_shape);
  const double* w = kernel_.value.data();
  for (std::size_t t = 0; t < steps; ++t) {
    double* y = out.data() + t * c_;
    std::copy(bias_.value.data(), bias_.value.data() + c_, y);
    for (std::size_t j = 0; j < k_; ++j) {
      const double* x = input.data() + (t + j) * d_in_;
      const double* wj = w + j * d_in_ * c_;
      for (std::size_t i = 0; i < d_in_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* wr = wj + i * c_;
        for (std::size_t o = 0; o < c_; ++o) y[o] += xi * wr[o];
      }
    }
  }
  return out;
}

Tensor Conv1D::forward(const Tensor& input, Mode) {
  Tensor out = infer(input);
  input_ = input;
  return out;
}

Tensor Conv1D::backward(const Tensor& upstream) {
  if (!input_) missing_forward();
  const Tensor& x = *input_;
  const Shape out_shape = output_shape(x.shape());
  if (upstream.shape() != out_shape) shape_error(out_shape, upstream.shape());
  const std::size_t steps = out_shape[0];
  Tensor dx(x.shape());
  const double* w = kernel_.value.data();
  double* dw = kernel_.grad.data();
  for (std::size_t t = 0; t < steps; ++t) {
    const double* g = upstream.data() + t * c_;
    for (std::size_t o = 0; o < c_; ++o) bias_.grad[o] += g[o];
    for (std::size_t j = 0; j < k_; ++j) {
      const double* xr = x.data() + (t + j) * d_in_;
      double* dxr = dx.data() + (t + j) * d_in_;
      const double* wj = w + j * d_in_ * c_;
      double* dwj = dw + j * d_in_ * c_;
      for (std::size_t i = 0; i < d_in_; ++i) {
        const double xi = xr[i];
        const double* wr = wj + i * c_;
        double* dwr = dwj + i * c_;
        double acc = 0.0;
        for (std::size_t o = 0; o < c_; ++o) {
          dwr[o] += xi * g[o];
          acc += wr[o] * g[o];
        }
        dxr[i] += acc;
      }
    }
  }
  input_.reset();
  return dx;
}

// ---------------------------------------------------------------- BiLSTM

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

BiLSTM::BiLSTM(std::string name, std::size_t d_in, std::size_t hidden)
    : Layer(std::move(name)), d_in_(d_in), h_(hidden) {
  static constexpr const char* kDirNames[2] = {"fwd", "bwd"};
  static constexpr const char* kGateNames[kGates] = {"i", "f", "g", "o"};
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t g = 0; g < kGates; ++g) {
      const std::string prefix =
          this->name() + "." + kDirNames[d] + "." + kGateNames[g];
      dirs_[d].kernels[g] = Parameter(prefix + ".kernel", Tensor({d_in + hidden, hidden}));
      dirs_[d].biases[g] = Parameter(prefix + ".bias", Tensor({hidden}));
    }
  }
}

Shape BiLSTM::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] != d_in_ || input[0] == 0) {
    throw ShapeError("layer '" + name() + "' (BiLSTM) expects input (L >= 1, " +
                     std::to_string(d_in_) + "), got " + shape_to_string(input));
  }
  return {2 * h_};
}

std::vector<Parameter*> BiLSTM::parameters() {
  std::vector<Parameter*> out;
  for (auto& d : dirs_) {
    for (std::size_t g = 0; g < kGates; ++g) {
      out.push_back(&d.kernels[g]);
      out.push_back(&d.biases[g]);
    }
  }
  return out;
}

std::vector<const Parameter*> BiLSTM::parameters() const {
  std::vector<const Parameter*> out;
  for (const auto& d : dirs_) {
    for (std::size_t g = 0; g < kGates; ++g) {
      out.push_back(&d.kernels[g]);
      out.push_back(&d.biases[g]);
    }
  }
  return out;
}

std::vector<double> BiLSTM::run_direction(const Tensor& input, std::size_t dir,
                                          std::vector<StepCache>* cache) const {
  const std::size_t steps = input.dim(0);
  const std::size_t zdim = d_in_ + h_;
  const Direction& p = dirs_[dir];
  std::vector<double> h(h_, 0.0), c(h_, 0.0), z(zdim), gates(kGates * h_);
  if (cache) cache->resize(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = dir == 0 ? s : steps - 1 - s;
    const auto x = input.row(t);
    std::copy(x.begin(), x.end(), z.begin());
    std::copy(h.begin(), h.end(), z.begin() + d_in_);
    for (std::size_t g = 0; g < kGates; ++g) {
      double* a = gates.data() + g * h_;
      const double* b = p.biases[g].value.data();
      std::copy(b, b + h_, a);
      const double* w = p.kernels[g].value.data();
      for (std::size_t r = 0; r < zdim; ++r) {
        const double zr = z[r];
        if (zr == 0.0) continue;
        const double* wr = w + r * h_;
        for (std::size_t u = 0; u < h_; ++u) a[u] += zr * wr[u];
      }
      for (std::size_t u = 0; u < h_; ++u) {
        a[u] = g == 2 ? std::tanh(a[u]) : sigmoid(a[u]);
      }
    }
    std::vector<double> c_prev = c;
    for (std::size_t u = 0; u < h_; ++u) {
      const double i = gates[u], f = gates[h_ + u], gg = gates[2 * h_ + u],
                   o = gates[3 * h_ + u];
      c[u] = f * c_prev[u] + i * gg;
      h[u] = o * std::tanh(c[u]);
    }
    if (cache) {
      auto& sc = (*cache)[s];
      sc.z = z;
      sc.gates = gates;
      sc.c_prev = std::move(c_prev);
      sc.c = c;
    }
  }
  return h;
}

Tensor BiLSTM::infer(const Tensor& input) const {
  Tensor out(output_shape(input.shape()));
  for (std::size_t d = 0; d < 2; ++d) {
    const auto h = run_direction(input, d, nullptr);
    std::copy(h.begin(), h.end(), out.data() + d * h_);
  }
  return out;
}

Tensor BiLSTM::forward(const Tensor& input, Mode) {
  Tensor out(output_shape(input.shape()));
  for (std::size_t d = 0; d < 2; ++d) {
    cache_[d].emplace();
    const auto h = run_direction(input, d, &*cache_[d]);
    std::copy(h.begin(), h.end(), out.data() + d * h_);
  }
  cached_len_ = input.dim(0);
  return out;
}

void BiLSTM::backprop_direction(std::size_t dir, std::span<const double> dh_final,
                                const std::vector<StepCache>& cache,
                                Tensor& input_grad) {
  const std::size_t steps = cache.size();
  const std::size_t zdim = d_in_ + h_;
  Direction& p = dirs_[dir];
  std::vector<double> dh(dh_final.begin(), dh_final.end());
  std::vector<double> dc(h_, 0.0), da(kGates * h_), dz(zdim);
  for (std::size_t s = steps; s-- > 0;) {
    const StepCache& sc = cache[s];
    for (std::size_t u = 0; u < h_; ++u) {
      const double i = sc.gates[u], f = sc.gates[h_ + u],
                   g = sc.gates[2 * h_ + u], o = sc.gates[3 * h_ + u];
      const double tc = std::tanh(sc.c[u]);
      const double dct = dc[u] + dh[u] * o * (1.0 - tc * tc);
      da[u] = dct * g * i * (1.0 - i);
      da[h_ + u] = dct * sc.c_prev[u] * f * (1.0 - f);
      da[2 * h_ + u] = dct * i * (1.0 - g * g);
      da[3 * h_ + u] = dh[u] * tc * o * (1.0 - o);
      dc[u] = dct * f;
    }
    std::fill(dz.begin(), dz.end(), 0.0);
    for (std::size_t gi = 0; gi < kGates; ++gi) {
      const double* a = da.data() + gi * h_;
      const double* w = p.kernels[gi].value.data();
      double* dw = p.kernels[gi].grad.data();
      double* db = p.biases[gi].grad.data();
      for (std::size_t u = 0; u < h_; ++u) db[u] += a[u];
      for (std::size_t r = 0; r < zdim; ++r) {
        const double zr = sc.z[r];
        const double* wr = w + r * h_;
        double* dwr = dw + r * h_;
        double acc = 0.0;
        for (std::size_t u = 0; u < h_; ++u) {
          dwr[u] += zr * a[u];
          acc += wr[u] * a[u];
        }
        dz[r] += acc;
      }
    }
    const std::size_t t = dir == 0 ? s : steps - 1 - s;
    auto dx = input_grad.row(t);
    for (std::size_t r = 0; r < d_in_; ++r) dx[r] += dz[r];
    std::copy(dz.begin() + d_in_, dz.end(), dh.begin());
  }
}

Tensor BiLSTM::backward(const Tensor& upstream) {
  if (!cache_[0] || !cache_[1]) missing_forward();
  if (upstream.shape() != Shape{2 * h_}) shape_error({2 * h_}, upstream.shape());
  Tensor dx({cached_len_, d_in_});
  for (std::size_t d = 0; d < 2; ++d) {
    backprop_direction(d, upstream.values().subspan(d * h_, h_), *cache_[d], dx);
    cache_[d].reset();
  }
  return dx;
}

// ---------------------------------------------------------------- Dropout

Dropout::Dropout(std::string name, double p, std::uint64_t seed)
    : Layer(std::move(name)), p_(p), rng_(seed) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("dropout probability must be in [0, 1), got " +
                                std::to_string(p));
  }
}

Tensor Dropout::forward(const Tensor& input, Mode mode) {
  Tensor mask(input.shape(), 1.0);
  if (mode == Mode::kTrain && p_ > 0.0) {
    std::bernoulli_distribution keep(1.0 - p_);
    const double scale = 1.0 / (1.0 - p_);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask[i] = keep(rng_) ? scale : 0.0;
    }
  }
  Tensor out = input;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  mask_ = std::move(mask);
  return out;
}

Tensor Dropout::backward(const Tensor& upstream) {
  if (!mask_) missing_forward();
  if (upstream.shape() != mask_->shape()) shape_error(mask_->shape(), upstream.shape());
  Tensor dx = upstream;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= (*mask_)[i];
  mask_.reset();
  return dx;
}

// ---------------------------------------------------------------- ReLU

Tensor ReLU::infer(const Tensor& input) const {
  Tensor out = input;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor ReLU::forward(const Tensor& input, Mode) {
  input_ = input;
  return infer(input);
}

Tensor ReLU::backward(const Tensor& upstream) {
  if (!input_) missing_forward();
  if (upstream.shape() != input_->shape()) shape_error(input_->shape(), upstream.shape());
  Tensor dx = upstream;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!((*input_)[i] > 0.0)) dx[i] = 0.0;
  }
  input_.reset();
  return dx;
}

// ---------------------------------------------------------------- Softmax

namespace {

std::size_t last_axis(const Tensor& t) {
  return t.rank() == 0 ? 1 : t.shape().back();
}

}  // namespace

Tensor Softmax::infer(const Tensor& input) const {
  Tensor out = input;
  const std::size_t width = last_axis(input);
  if (width == 0) return out;
  for (std::size_t base = 0; base < out.size(); base += width) {
    double* row = out.data() + base;
    const double mx = *std::max_element(row, row + width);
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      row[i] = std::exp(row[i] - mx);
      sum += row[i];
    }
    for (std::size_t i = 0; i < width; ++i) row[i] /= sum;
  }
  return out;
}

Tensor Softmax::forward(const Tensor& input, Mode) {
  output_ = infer(input);
  return *output_;
}

Tensor Softmax::backward(const Tensor& upstream) {
  if (!output_) missing_forward();
  const Tensor& y = *output_;
  if (upstream.shape() != y.shape()) shape_error(y.shape(), upstream.shape());
  const std::size_t width = last_axis(y);
  Tensor dx(y.shape());
  for (std::size_t base = 0; base < y.size(); base += width) {
    double dot = 0.0;
    for (std::size_t i = 0; i < width; ++i) dot += upstream[base + i] * y[base + i];
    for (std::size_t i = 0; i < width; ++i) {
      dx[base + i] = y[base + i] * (upstream[base + i] - dot);
    }
  }
  output_.reset();
  return dx;
}

// ---------------------------------------------------------------- Flatten

Tensor Flatten::infer(const Tensor& input) const {
  return input.reshaped({input.size()});
}

Tensor Flatten::forward(const Tensor& input, Mode) {
  input_shape_ = input.shape();
  return infer(input);
}

Tensor Flatten::backward(const Tensor& upstream) {
  if (!input_shape_) missing_forward();
  Tensor dx = upstream.reshaped(*input_shape_);
  input_shape_.reset();
  return dx;
}

// ---------------------------------------------------------------- Sequential

Sequential::Sequential(const Sequential& other) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Sequential& Sequential::operator=(const Sequential& other) {
  if (this != &other) {
    Sequential copy(other);
    layers_ = std::move(copy.layers_);
  }
  return *this;
}

Layer& Sequential::add(LayerPtr layer) {
  layers_.push_back(std::move(layer));
  return *layers_.back();
}

Shape Sequential::output_shape(const Shape& input) const {
  Shape s = input;
  for (const auto& l : layers_) s = l->output_shape(s);
  return s;
}

Tensor Sequential::infer(const Tensor& input) const {
  Tensor x = input;
  for (const auto& l : layers_) x = l->infer(x);
  return x;
}

Tensor Sequential::forward(const Tensor& input, Mode mode) {
  Tensor x = input;
  for (const auto& l : layers_) x = l->forward(x, mode);
  return x;
}

Tensor Sequential::backward(const Tensor& upstream) {
  Tensor g = upstream;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    g = (*it)->backward(g);
  }
  return g;
}

std::vector<Parameter*> Sequential::parameters() {
  std::vector<Parameter*> out;
  for (auto& l : layers_) {
    auto p = l->parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<const Parameter*> Sequential::parameters() const {
  std::vector<const Parameter*> out;
  for (const auto& l : layers_) {
    auto p = std::as_const(*l).parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void Sequential::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

void Sequential::reseed(std::uint64_t seed) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i]->reseed(seed * 1000003ULL + i);
  }
}

// ---------------------------------------------------------------- Concat

Concat::Concat(std::string name, std::vector<Sequential> branches, Join join)
    : Layer(std::move(name)), branches_(std::move(branches)), join_(join) {
  if (branches_.empty()) throw ShapeError("Concat '" + this->name() + "' has no branches");
}

Shape Concat::output_shape(const Shape& input) const {
  std::vector<Shape> shapes;
  for (const auto& b : branches_) shapes.push_back(b.output_shape(input));
  if (join_ == Join::kFlat) {
    std::size_t width = 0;
    for (const auto& s : shapes) {
      if (s.size() != 1) {
        throw ShapeError("Concat '" + name() + "' (flat) needs 1-D branch outputs, got " +
                         shape_to_string(s));
      }
      width += s[0];
    }
    return {width};
  }
  std::size_t rows = shapes[0].at(0), channels = 0;
  for (const auto& s : shapes) {
    if (s.size() != 2) {
      throw ShapeError("Concat '" + name() + "' (crop) needs 2-D branch outputs, got " +
                       shape_to_string(s));
    }
    rows = std::min(rows, s[0]);
    channels += s[1];
  }
  return {rows, channels};
}

Tensor Concat::merge(const std::vector<Tensor>& outs) const {
  if (join_ == Join::kFlat) {
    std::vector<double> v;
    for (const auto& o : outs) v.insert(v.end(), o.values().begin(), o.values().end());
    const std::size_t n = v.size();
    return Tensor({n}, std::move(v));
  }
  std::size_t rows = outs[0].dim(0), channels = 0;
  for (const auto& o : outs) {
    rows = std::min(rows, o.dim(0));
    channels += o.dim(1);
  }
  Tensor y({rows, channels});
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t col = 0;
    for (const auto& o : outs) {
      const auto src = o.row(r);
      std::copy(src.begin(), src.end(), y.row(r).begin() + col);
      col += o.dim(1);
    }
  }
  return y;
}

Tensor Concat::infer(const Tensor& input) const {
  std::vector<Tensor> outs;
  outs.reserve(branches_.size());
  for (const auto& b : branches_) outs.push_back(b.infer(input));
  return merge(outs);
}

Tensor Concat::forward(const Tensor& input, Mode mode) {
  output_shape(input.shape());
  std::vector<Tensor> outs;
  std::vector<Shape> shapes;
  for (auto& b : branches_) {
    outs.push_back(b.forward(input, mode));
    shapes.push_back(outs.back().shape());
  }
  branch_shapes_ = std::move(shapes);
  input_shape_ = input.shape();
  return merge(outs);
}

Tensor Concat::backward(const Tensor& upstream) {
  if (!branch_shapes_) missing_forward();
  const auto& shapes = *branch_shapes_;
  Tensor dx(*input_shape_);
  std::size_t offset = 0;
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    Tensor g(shapes[b]);
    if (join_ == Join::kFlat) {
      std::copy_n(upstream.data() + offset, g.size(), g.data());
      offset += g.size();
    } else {
      const std::size_t rows = upstream.dim(0), ch = shapes[b][1];
      for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(upstream.row(r).begin() + offset, ch, g.row(r).begin());
      }
      offset += ch;
    }
    Tensor gb = branches_[b].backward(g);
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += gb[i];
  }
  branch_shapes_.reset();
  input_shape_.reset();
  return dx;
}

std::vector<Parameter*> Concat::parameters() {
  std::vector<Parameter*> out;
  for (auto& b : branches_) {
    auto p = b.parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<const Parameter*> Concat::parameters() const {
  std::vector<const Parameter*> out;
  for (const auto& b : branches_) {
    auto p = b.parameters();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void Concat::reseed(std::uint64_t seed) {
  for (std::size_t b = 0; b < branches_.size(); ++b) branches_[b].reseed(seed + 7919 * (b + 1));
}

// ---------------------------------------------------------------- init

namespace {

void glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out,
            std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.values()) v = dist(rng);
}

void init_layer(Layer& layer, std::mt19937_64& rng) {
  switch (layer.kind()) {
    case LayerKind::kDense: {
      auto& d = static_cast<Dense&>(layer);
      glorot(d.weights().value, d.in_features(), d.out_features(), rng);
      d.bias().value.fill(0.0);
      break;
    }
    case LayerKind::kConv1D: {
      auto& c = static_cast<Conv1D&>(layer);
      const auto& s = c.kernel().value.shape();
      glorot(c.kernel().value, s[0] * s[1], s[0] * s[2], rng);
      c.bias().value.fill(0.0);
      break;
    }
    case LayerKind::kBiLSTM: {
      auto& l = static_cast<BiLSTM&>(layer);
      for (std::size_t d = 0; d < 2; ++d) {
        auto& dir = l.direction(d);
        for (std::size_t g = 0; g < BiLSTM::kGates; ++g) {
          const auto& s = dir.kernels[g].value.shape();
          glorot(dir.kernels[g].value, s[0], s[1], rng);
          dir.biases[g].value.fill(g == 1 ? 1.0 : 0.0);
        }
      }
      break;
    }
    default:
      break;
  }
}

void init_sequence(Sequential& net, std::mt19937_64& rng);

void init_any(Layer& layer, std::mt19937_64& rng) {
  if (layer.kind() == LayerKind::kConcat) {
    for (auto& b : static_cast<Concat&>(layer).branches()) {
      init_sequence(b, rng);
    }
    return;
  }
  init_layer(layer, rng);
}

void init_sequence(Sequential& net, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < net.size(); ++i) init_any(net.layer(i), rng);
}

}  // namespace

void initialize(Sequential& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  init_sequence(net, rng);
}

}  // namespace intentrec::nn
