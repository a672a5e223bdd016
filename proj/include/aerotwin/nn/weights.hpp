/*
 * Copyright (C) 2026 The aerotwin authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AEROTWIN_NN_WEIGHTS_HPP
#define AEROTWIN_NN_WEIGHTS_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace aerotwin {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

/// Architecture sizes. node_features == 0 disables the graph layers.
struct NetDims {
    std::size_t input_size = 0;  // per-step frame width
    std::size_t hidden_size = 32;
    std::size_t lstm_layers = 1;
    std::size_t num_cells = 9;  // head outputs and graph nodes
    std::size_t node_features = 0;
    std::size_t gcn_hidden = 8;
    std::size_t gcn_layers = 2;

    bool uses_gcn() const { return node_features > 0 && gcn_layers > 0; }
    /// Frame plus the flattened per-cell graph embedding.
    std::size_t lstm_input_size() const { return input_size + (uses_gcn() ? num_cells * gcn_hidden : 0); }
    void validate() const;
    friend bool operator==(const NetDims&, const NetDims&) = default;
};

struct TensorInfo {
    std::string name;
    std::size_t offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t fan_in = 0;
    std::size_t size() const { return rows * cols; }
};

/// All parameters live in one flat vector; tensors are row-major views.
/// Names: gcn.{l}.weight (in x out), gcn.{l}.bias (1 x out),
/// lstm.{l}.w_input (4H x in), lstm.{l}.w_hidden (4H x H), lstm.{l}.bias
/// (4H x 1; gate blocks i, f, g, o), head.weight (cells x H), head.bias.
class ModelWeights {
public:
    ModelWeights() = default;
    /// Zero-initialised.
    explicit ModelWeights(const NetDims& dims);

    const NetDims& dims() const { return dims_; }
    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    const std::vector<TensorInfo>& tensors() const { return tensors_; }
    const TensorInfo& tensor(std::string_view name) const;
    MatrixMap matrix(std::string_view name);
    ConstMatrixMap matrix(std::string_view name) const;

    friend bool operator==(const ModelWeights& a, const ModelWeights& b) {
        return a.dims_ == b.dims_ && a.values_ == b.values_;
    }

private:
    NetDims dims_;
    std::vector<TensorInfo> tensors_;
    std::vector<double> values_;
};

/// Uniform in +-1/sqrt(fan_in), seeded.
ModelWeights init_weights(const NetDims& dims, std::uint64_t seed);

/// Named tensors with a dims header; doubles round-trip exactly.
nlohmann::json weights_to_json(const ModelWeights& w);
ModelWeights weights_from_json(const nlohmann::json& j);
nlohmann::json dims_to_json(const NetDims& d);
NetDims dims_from_json(const nlohmann::json& j);

}  // namespace aerotwin

#endif
