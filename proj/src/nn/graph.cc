// Copyright 2026 The lcrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lcrec/nn/graph.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lcrec/errors.h"

namespace lcrec::nn {
namespace {

double SigmoidOf(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

void CheckSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.SameShape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.ShapeString() +
                     " vs " + b.ShapeString());
  }
}

}  // namespace

Var Graph::Push(Tensor value, bool requires_grad, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor& Graph::GradOf(int id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

Var Graph::Param(std::size_t index) {
  auto it = param_nodes_.find(index);
  if (it != param_nodes_.end()) return Var{it->second};
  const Parameter& p = (*store_)[index];
  Var v = Push(p.value, p.receives_gradient(), nullptr);
  nodes_[v.id].param = static_cast<int>(index);
  param_nodes_.emplace(index, v.id);
  return v;
}

Var Graph::Constant(Tensor value) {
  return Push(std::move(value), false, nullptr);
}

void Graph::ApplyRelu(Tensor& y) {
  std::uint64_t h = relu_signature_;
  for (double& v : y.values()) {
    const bool on = v > 0.0;
    if (!on) v = 0.0;
    h = (h ^ (on ? 0x9eu : 0x3bu)) * 1099511628211ull;
  }
  relu_signature_ = h;
}

Var Graph::StopGradient(Var x) {
  if (sg_replay_) {
    if (sg_next_ >= sg_replay_->size()) {
      throw ShapeError("stop-gradient replay: more operands than recorded");
    }
    const Tensor& held = (*sg_replay_)[sg_next_++];
    if (!held.SameShape(value(x))) {
      throw ShapeError("stop-gradient replay: recorded " + held.ShapeString() +
                       ", got " + value(x).ShapeString());
    }
    return Push(held, false, nullptr);
  }
  if (sg_record_) sg_record_->push_back(value(x));
  return Push(value(x), false, nullptr);
}

Var Graph::Dense(Var x, Var weight, Var bias, Activation act) {
  const Tensor& xv = value(x);
  const Tensor& wv = value(weight);
  const Tensor& bv = value(bias);
  if (wv.rank() != 2 || xv.cols() != wv.dim(0) || bv.size() != wv.dim(1)) {
    throw ShapeError("dense: input " + xv.ShapeString() + ", weight " +
                     wv.ShapeString() + ", bias " + bv.ShapeString());
  }
  const std::size_t batch = xv.rows();
  const std::size_t in = wv.dim(0);
  const std::size_t out = wv.dim(1);
  Tensor y({batch, out});
  for (std::size_t r = 0; r < batch; ++r) {
    const double* xr = xv.raw() + r * in;
    double* yr = y.raw() + r * out;
    for (std::size_t o = 0; o < out; ++o) yr[o] = bv[o];
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = xr[i];
      const double* wr = wv.raw() + i * out;
      for (std::size_t o = 0; o < out; ++o) yr[o] += xi * wr[o];
    }
  }
  if (act == Activation::kRelu) {
    ApplyRelu(y);
  } else if (act == Activation::kSigmoid) {
    for (double& v : y.values()) v = SigmoidOf(v);
  }
  const bool needs = Needs(x) || Needs(weight) || Needs(bias);
  return Push(std::move(y), needs, [x, weight, bias, act, batch, in, out](
                                       Graph& g, int self) {
    const Tensor& yv = g.nodes_[self].value;
    const Tensor& gy = g.nodes_[self].grad;
    Tensor gpre(gy.shape());
    for (std::size_t j = 0; j < gy.size(); ++j) {
      switch (act) {
        case Activation::kIdentity:
          gpre[j] = gy[j];
          break;
        case Activation::kRelu:
          gpre[j] = yv[j] > 0.0 ? gy[j] : 0.0;
          break;
        case Activation::kSigmoid:
          gpre[j] = gy[j] * yv[j] * (1.0 - yv[j]);
          break;
      }
    }
    const Tensor& xv = g.value(x);
    const Tensor& wv = g.value(weight);
    if (g.Needs(x)) {
      Tensor& gx = g.GradOf(x.id);
      for (std::size_t r = 0; r < batch; ++r) {
        const double* gr = gpre.raw() + r * out;
        double* gxr = gx.raw() + r * in;
        for (std::size_t i = 0; i < in; ++i) {
          const double* wr = wv.raw() + i * out;
          double acc = 0.0;
          for (std::size_t o = 0; o < out; ++o) acc += gr[o] * wr[o];
          gxr[i] += acc;
        }
      }
    }
    if (g.Needs(weight)) {
      Tensor& gw = g.GradOf(weight.id);
      for (std::size_t r = 0; r < batch; ++r) {
        const double* xr = xv.raw() + r * in;
        const double* gr = gpre.raw() + r * out;
        for (std::size_t i = 0; i < in; ++i) {
          const double xi = xr[i];
          double* gwr = gw.raw() + i * out;
          for (std::size_t o = 0; o < out; ++o) gwr[o] += xi * gr[o];
        }
      }
    }
    if (g.Needs(bias)) {
      Tensor& gb = g.GradOf(bias.id);
      for (std::size_t r = 0; r < batch; ++r) {
        const double* gr = gpre.raw() + r * out;
        for (std::size_t o = 0; o < out; ++o) gb[o] += gr[o];
      }
    }
  });
}

Var Graph::Conv1d(Var x, Var kernels, Var bias) {
  const Tensor& xv = value(x);
  const Tensor& kv = value(kernels);
  const Tensor& bv = value(bias);
  if (xv.rank() != 3 || kv.rank() != 3 || xv.dim(1) != kv.dim(1) ||
      bv.size() != kv.dim(0)) {
    throw ShapeError("conv1d: input " + xv.ShapeString() + ", kernels " +
                     kv.ShapeString() + ", bias " + bv.ShapeString());
  }
  const std::size_t batch = xv.dim(0);
  const std::size_t c_in = xv.dim(1);
  const std::size_t length = xv.dim(2);
  const std::size_t c_out = kv.dim(0);
  const std::size_t width = kv.dim(2);
  if (length < width) {
    throw ShapeError("conv1d: input length " + std::to_string(length) +
                     " shorter than kernel " + std::to_string(width));
  }
  const std::size_t out_len = length - width + 1;
  Tensor y({batch, c_out, out_len});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xb = xv.raw() + b * c_in * length;
    for (std::size_t o = 0; o < c_out; ++o) {
      double* yo = y.raw() + (b * c_out + o) * out_len;
      for (std::size_t t = 0; t < out_len; ++t) yo[t] = bv[o];
      for (std::size_t c = 0; c < c_in; ++c) {
        const double* xc = xb + c * length;
        const double* k = kv.raw() + (o * c_in + c) * width;
        for (std::size_t t = 0; t < out_len; ++t) {
          double acc = 0.0;
          for (std::size_t j = 0; j < width; ++j) acc += k[j] * xc[t + j];
          yo[t] += acc;
        }
      }
    }
  }
  const bool needs = Needs(x) || Needs(kernels) || Needs(bias);
  return Push(std::move(y), needs, [=](Graph& g, int self) {
    const Tensor& gy = g.nodes_[self].grad;
    const Tensor& xv = g.value(x);
    const Tensor& kv = g.value(kernels);
    Tensor* gx = g.Needs(x) ? &g.GradOf(x.id) : nullptr;
    Tensor* gk = g.Needs(kernels) ? &g.GradOf(kernels.id) : nullptr;
    Tensor* gb = g.Needs(bias) ? &g.GradOf(bias.id) : nullptr;
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t o = 0; o < c_out; ++o) {
        const double* go = gy.raw() + (b * c_out + o) * out_len;
        if (gb != nullptr) {
          for (std::size_t t = 0; t < out_len; ++t) (*gb)[o] += go[t];
        }
        for (std::size_t c = 0; c < c_in; ++c) {
          const std::size_t x_off = (b * c_in + c) * length;
          const std::size_t k_off = (o * c_in + c) * width;
          for (std::size_t j = 0; j < width; ++j) {
            if (gk != nullptr) {
              double acc = 0.0;
              for (std::size_t t = 0; t < out_len; ++t) {
                acc += go[t] * xv[x_off + t + j];
              }
              (*gk)[k_off + j] += acc;
            }
            if (gx != nullptr) {
              const double kj = kv[k_off + j];
              double* gxc = gx->raw() + x_off + j;
              for (std::size_t t = 0; t < out_len; ++t) gxc[t] += go[t] * kj;
            }
          }
        }
      }
    }
  });
}

Var Graph::Activate(Var x, Activation act) {
  Tensor y = value(x);
  if (act == Activation::kRelu) {
    ApplyRelu(y);
  } else if (act == Activation::kSigmoid) {
    for (double& v : y.values()) v = SigmoidOf(v);
  }
  return Push(std::move(y), Needs(x), [x, act](Graph& g, int self) {
    const Tensor& yv = g.nodes_[self].value;
    const Tensor& gy = g.nodes_[self].grad;
    Tensor& gx = g.GradOf(x.id);
    for (std::size_t j = 0; j < gy.size(); ++j) {
      switch (act) {
        case Activation::kIdentity:
          gx[j] += gy[j];
          break;
        case Activation::kRelu:
          if (yv[j] > 0.0) gx[j] += gy[j];
          break;
        case Activation::kSigmoid:
          gx[j] += gy[j] * yv[j] * (1.0 - yv[j]);
          break;
      }
    }
  });
}

Var Graph::Scale(Var x, double factor) {
  Tensor y = value(x);
  for (double& v : y.values()) v *= factor;
  return Push(std::move(y), Needs(x), [x, factor](Graph& g, int self) {
    const Tensor& gy = g.nodes_[self].grad;
    Tensor& gx = g.GradOf(x.id);
    for (std::size_t j = 0; j < gy.size(); ++j) gx[j] += factor * gy[j];
  });
}

Var Graph::Add(Var a, Var b) {
  CheckSameShape(value(a), value(b), "add");
  Tensor y = value(a);
  const Tensor& bv = value(b);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += bv[j];
  return Push(std::move(y), Needs(a) || Needs(b), [a, b](Graph& g, int self) {
    const Tensor& gy = g.nodes_[self].grad;
    for (Var in : {a, b}) {
      if (!g.Needs(in)) continue;
      Tensor& gin = g.GradOf(in.id);
      for (std::size_t j = 0; j < gy.size(); ++j) gin[j] += gy[j];
    }
  });
}

Var Graph::Sub(Var a, Var b) {
  CheckSameShape(value(a), value(b), "sub");
  Tensor y = value(a);
  const Tensor& bv = value(b);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] -= bv[j];
  return Push(std::move(y), Needs(a) || Needs(b), [a, b](Graph& g, int self) {
    const Tensor& gy = g.nodes_[self].grad;
    if (g.Needs(a)) {
      Tensor& ga = g.GradOf(a.id);
      for (std::size_t j = 0; j < gy.size(); ++j) ga[j] += gy[j];
    }
    if (g.Needs(b)) {
      Tensor& gb = g.GradOf(b.id);
      for (std::size_t j = 0; j < gy.size(); ++j) gb[j] -= gy[j];
    }
  });
}

Var Graph::Mul(Var a, Var b) {
  CheckSameShape(value(a), value(b), "mul");
  Tensor y = value(a);
  const Tensor& bv = value(b);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] *= bv[j];
  return Push(std::move(y), Needs(a) || Needs(b), [a, b](Graph& g, int self) {
    const Tensor& gy = g.nodes_[self].grad;
    if (g.Needs(a)) {
      const Tensor& bv = g.value(b);
      Tensor& ga = g.GradOf(a.id);
      for (std::size_t j = 0; j < gy.size(); ++j) ga[j] += gy[j] * bv[j];
    }
    if (g.Needs(b)) {
      const Tensor& av = g.value(a);
      Tensor& gb = g.GradOf(b.id);
      for (std::size_t j = 0; j < gy.size(); ++j) gb[j] += gy[j] * av[j];
    }
  });
}

Var Graph::Concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const std::size_t batch = value(parts[0]).rows();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  bool needs = false;
  for (Var p : parts) {
    const Tensor& pv = value(p);
    if (pv.rows() != batch) {
      throw ShapeError("concat: batch mismatch " + pv.ShapeString());
    }
    widths.push_back(pv.cols());
    total += pv.cols();
    needs = needs || Needs(p);
  }
  Tensor y({batch, total});
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& pv = value(parts[k]);
    for (std::size_t r = 0; r < batch; ++r) {
      std::copy_n(pv.raw() + r * widths[k], widths[k],
                  y.raw() + r * total + offset);
    }
    offset += widths[k];
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return Push(std::move(y), needs,
              [inputs, widths, batch, total](Graph& g, int self) {
                const Tensor& gy = g.nodes_[self].grad;
                std::size_t offset = 0;
                for (std::size_t k = 0; k < inputs.size(); ++k) {
                  if (g.Needs(inputs[k])) {
                    Tensor& gp = g.GradOf(inputs[k].id);
                    for (std::size_t r = 0; r < batch; ++r) {
                      const double* src = gy.raw() + r * total + offset;
                      double* dst = gp.raw() + r * widths[k];
                      for (std::size_t j = 0; j < widths[k]; ++j) {
                        dst[j] += src[j];
                      }
                    }
                  }
                  offset += widths[k];
                }
              });
}

Var Graph::Flatten(Var x) {
  const Tensor& xv = value(x);
  Tensor y = xv.Reshaped({xv.rows(), xv.cols()});
  return Push(std::move(y), Needs(x), [x](Graph& g, int self) {
    const Tensor& gy = g.nodes_[self].grad;
    Tensor& gx = g.GradOf(x.id);
    for (std::size_t j = 0; j < gy.size(); ++j) gx[j] += gy[j];
  });
}

Var Graph::Softmax(Var x) {
  Tensor y = value(x);
  const std::size_t n = y.cols();
  for (std::size_t r = 0; r < y.rows(); ++r) {
    double* yr = y.raw() + r * n;
    const double mx = *std::max_element(yr, yr + n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      yr[j] = std::exp(yr[j] - mx);
      sum += yr[j];
    }
    for (std::size_t j = 0; j < n; ++j) yr[j] /= sum;
  }
  return Push(std::move(y), Needs(x), [x, n](Graph& g, int self) {
    const Tensor& yv = g.nodes_[self].value;
    const Tensor& gy = g.nodes_[self].grad;
    Tensor& gx = g.GradOf(x.id);
    for (std::size_t r = 0; r < yv.rows(); ++r) {
      const double* yr = yv.raw() + r * n;
      const double* gr = gy.raw() + r * n;
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += gr[j] * yr[j];
      for (std::size_t j = 0; j < n; ++j) {
        gx[r * n + j] += yr[j] * (gr[j] - dot);
      }
    }
  });
}

Var Graph::Mixture(Var weights, std::span<const Var> experts) {
  const Tensor& wv = value(weights);
  if (wv.cols() != experts.size() || experts.empty()) {
    throw ShapeError("mixture: gate width " + std::to_string(wv.cols()) +
                     " vs " + std::to_string(experts.size()) + " experts");
  }
  const std::size_t batch = wv.rows();
  const std::size_t width = value(experts[0]).cols();
  bool needs = Needs(weights);
  for (Var e : experts) {
    const Tensor& ev = value(e);
    if (ev.rows() != batch || ev.cols() != width) {
      throw ShapeError("mixture: expert output " + ev.ShapeString());
    }
    needs = needs || Needs(e);
  }
  const std::size_t count = experts.size();
  Tensor y({batch, width});
  for (std::size_t r = 0; r < batch; ++r) {
    double* yr = y.raw() + r * width;
    for (std::size_t e = 0; e < count; ++e) {
      const double w = wv[r * count + e];
      const double* er = value(experts[e]).raw() + r * width;
      for (std::size_t j = 0; j < width; ++j) yr[j] += w * er[j];
    }
  }
  std::vector<Var> inputs(experts.begin(), experts.end());
  return Push(std::move(y), needs,
              [weights, inputs, batch, width, count](Graph& g, int self) {
                const Tensor& gy = g.nodes_[self].grad;
                const Tensor& wv = g.value(weights);
                if (g.Needs(weights)) {
                  Tensor& gw = g.GradOf(weights.id);
                  for (std::size_t r = 0; r < batch; ++r) {
                    for (std::size_t e = 0; e < count; ++e) {
                      const double* er = g.value(inputs[e]).raw() + r * width;
                      const double* gr = gy.raw() + r * width;
                      double acc = 0.0;
                      for (std::size_t j = 0; j < width; ++j) {
                        acc += gr[j] * er[j];
                      }
                      gw[r * count + e] += acc;
                    }
                  }
                }
                for (std::size_t e = 0; e < count; ++e) {
                  if (!g.Needs(inputs[e])) continue;
                  Tensor& ge = g.GradOf(inputs[e].id);
                  for (std::size_t r = 0; r < batch; ++r) {
                    const double w = wv[r * count + e];
                    for (std::size_t j = 0; j < width; ++j) {
                      ge[r * width + j] += w * gy[r * width + j];
                    }
                  }
                }
              });
}

Var Graph::SigmoidCrossEntropy(Var logits, std::span<const double> labels,
                               std::span<const double> mask,
                               double normalizer) {
  const Tensor& zv = value(logits);
  if (zv.cols() != 1 || zv.rows() != labels.size() ||
      labels.size() != mask.size()) {
    throw ShapeError("sigmoid_cross_entropy: logits " + zv.ShapeString() +
                     " with " + std::to_string(labels.size()) + " labels");
  }
  double loss = 0.0;
  if (normalizer > 0.0) {
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (mask[r] == 0.0) continue;
      loss += mask[r] * (Softplus(zv[r]) - labels[r] * zv[r]);
    }
    loss /= normalizer;
  }
  std::vector<double> y(labels.begin(), labels.end());
  std::vector<double> m(mask.begin(), mask.end());
  return Push(Tensor({1}, {loss}), Needs(logits),
              [logits, y, m, normalizer](Graph& g, int self) {
                if (normalizer <= 0.0) return;
                const double upstream = g.nodes_[self].grad[0];
                const Tensor& zv = g.value(logits);
                Tensor& gz = g.GradOf(logits.id);
                for (std::size_t r = 0; r < y.size(); ++r) {
                  if (m[r] == 0.0) continue;
                  gz[r] += upstream * m[r] * (SigmoidOf(zv[r]) - y[r]) /
                           normalizer;
                }
              });
}

Var Graph::SquaredError(Var a, Var b, double normalizer) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  CheckSameShape(av, bv, "squared_error");
  double loss = 0.0;
  for (std::size_t j = 0; j < av.size(); ++j) {
    const double d = av[j] - bv[j];
    loss += d * d;
  }
  loss /= normalizer;
  return Push(Tensor({1}, {loss}), Needs(a) || Needs(b),
              [a, b, normalizer](Graph& g, int self) {
                const double upstream = g.nodes_[self].grad[0];
                const Tensor& av = g.value(a);
                const Tensor& bv = g.value(b);
                const double k = 2.0 * upstream / normalizer;
                if (g.Needs(a)) {
                  Tensor& ga = g.GradOf(a.id);
                  for (std::size_t j = 0; j < av.size(); ++j) {
                    ga[j] += k * (av[j] - bv[j]);
                  }
                }
                if (g.Needs(b)) {
                  Tensor& gb = g.GradOf(b.id);
                  for (std::size_t j = 0; j < av.size(); ++j) {
                    gb[j] -= k * (av[j] - bv[j]);
                  }
                }
              });
}

Var Graph::WeightedSum(std::span<const Var> terms,
                       std::span<const double> weights) {
  if (terms.size() != weights.size()) {
    throw ShapeError("weighted_sum: term/weight count mismatch");
  }
  double total = 0.0;
  bool needs = false;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Tensor& tv = value(terms[k]);
    if (tv.size() != 1) throw ShapeError("weighted_sum: non-scalar term");
    total += weights[k] * tv[0];
    needs = needs || Needs(terms[k]);
  }
  std::vector<Var> inputs(terms.begin(), terms.end());
  std::vector<double> w(weights.begin(), weights.end());
  return Push(Tensor({1}, {total}), needs, [inputs, w](Graph& g, int self) {
    const double upstream = g.nodes_[self].grad[0];
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (g.Needs(inputs[k])) g.GradOf(inputs[k].id)[0] += w[k] * upstream;
    }
  });
}

void Graph::Backward(Var loss, GradientBuffer& grads) {
  if (value(loss).size() != 1) {
    throw ShapeError("backward: loss must be a scalar, got " +
                     value(loss).ShapeString());
  }
  if (grads.size() != store_->size()) {
    throw ShapeError("backward: gradient buffer does not match store");
  }
  if (!Needs(loss)) return;
  GradOf(loss.id)[0] += 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.param >= 0) {
      Tensor& dst = grads[n.param];
      for (std::size_t j = 0; j < n.grad.size(); ++j) dst[j] += n.grad[j];
    } else if (n.backward) {
      n.backward(*this, id);
    }
  }
}

}  // namespace lcrec::nn
