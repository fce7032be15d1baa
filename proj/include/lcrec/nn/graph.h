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

#ifndef LCREC_NN_GRAPH_H_
#define LCREC_NN_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lcrec/nn/parameter_store.h"
#include "lcrec/nn/tensor.h"

namespace lcrec::nn {

enum class Activation { kIdentity, kRelu, kSigmoid };

// Handle to a node recorded on a Graph.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode evaluation context for one forward pass. Every op records its
// output value and a closure that pushes the output gradient to its inputs.
// Nodes that do not depend on a trainable parameter (constants, frozen
// parameters, buffers and everything behind StopGradient) are marked as not
// requiring gradients and are skipped entirely by Backward.
//
// All batched ops treat axis 0 as the batch axis and compute each row
// independently, so a sample's output never depends on its batch neighbours.
class Graph {
 public:
  explicit Graph(const ParameterStore& store) : store_(&store) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Param(std::size_t index);
  Var Param(std::string_view name) { return Param(store_->IndexOf(name)); }
  Var Constant(Tensor value);
  // Forward identity; contributes nothing upstream.
  Var StopGradient(Var x);

  // Stop-gradient operands seen by this graph are appended to `sink`, in call
  // order. A later graph built by the same code can replay them, so that its
  // forward value is the surrogate objective whose derivative Backward
  // computes (operands under stop-gradient held fixed).
  void RecordStopGradients(std::vector<Tensor>* sink) { sg_record_ = sink; }
  void ReplayStopGradients(const std::vector<Tensor>* source) {
    sg_replay_ = source;
    sg_next_ = 0;
  }

  // act(x * weight + bias) with x [B x in], weight [in x out], bias [out].
  Var Dense(Var x, Var weight, Var bias, Activation act);
  // Valid cross-correlation, stride 1. x [B x C_in x L],
  // kernels [C_out x C_in x k], bias [C_out] -> [B x C_out x (L - k + 1)].
  Var Conv1d(Var x, Var kernels, Var bias);
  Var Activate(Var x, Activation act);
  Var Relu(Var x) { return Activate(x, Activation::kRelu); }
  Var Sigmoid(Var x) { return Activate(x, Activation::kSigmoid); }
  Var Scale(Var x, double factor);
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  // Hadamard product of equally shaped tensors.
  Var Mul(Var a, Var b);
  // Concatenation along the feature axis of [B x n_i] tensors.
  Var Concat(std::span<const Var> parts);
  // [B x ...] -> [B x cols].
  Var Flatten(Var x);
  // Row-wise softmax.
  Var Softmax(Var x);
  // out[b] = sum_e weights[b, e] * experts[e][b].
  Var Mixture(Var weights, std::span<const Var> experts);

  // Scalar sum_b mask_b * BCE(sigmoid(logit_b), label_b) / normalizer, with
  // logits [B x 1]. A zero normalizer yields a zero loss.
  Var SigmoidCrossEntropy(Var logits, std::span<const double> labels,
                          std::span<const double> mask, double normalizer);
  // Scalar sum((a - b)^2) / normalizer.
  Var SquaredError(Var a, Var b, double normalizer);
  // Scalar sum_i weights[i] * terms[i] over scalar terms.
  Var WeightedSum(std::span<const Var> terms, std::span<const double> weights);

  // Hash of the on/off pattern of every relu evaluated so far. Two forward
  // passes with equal signatures took the same piecewise-linear branch.
  std::uint64_t relu_signature() const { return relu_signature_; }

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  std::size_t node_count() const { return nodes_.size(); }

  // Accumulates d(loss)/d(parameter) into `grads` (indexed like the store).
  // Each recorded node is visited at most once.
  void Backward(Var loss, GradientBuffer& grads);

 private:
  using BackwardFn = std::function<void(Graph&, int)>;
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    int param = -1;
    BackwardFn backward;
  };

  Var Push(Tensor value, bool requires_grad, BackwardFn backward);
  Tensor& GradOf(int id);
  Node& node(Var v) { return nodes_.at(v.id); }
  const Node& node(Var v) const { return nodes_.at(v.id); }
  bool Needs(Var v) const { return nodes_[v.id].requires_grad; }
  void ApplyRelu(Tensor& y);

  const ParameterStore* store_;
  std::vector<Node> nodes_;
  std::unordered_map<std::size_t, int> param_nodes_;
  std::vector<Tensor>* sg_record_ = nullptr;
  const std::vector<Tensor>* sg_replay_ = nullptr;
  std::size_t sg_next_ = 0;
  std::uint64_t relu_signature_ = 14695981039346656037ull;
};

}  // namespace lcrec::nn

#endif  // LCREC_NN_GRAPH_H_
