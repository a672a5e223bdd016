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

#include "aerotwin/nn/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "aerotwin/core/random.hpp"

namespace aerotwin {

void NetDims::validate() const {
    if (input_size == 0) throw std::invalid_argument("input_size must be positive");
    if (hidden_size == 0 || lstm_layers == 0) throw std::invalid_argument("LSTM needs hidden_size and layers > 0");
    if (num_cells == 0) throw std::invalid_argument("num_cells must be positive");
    if (node_features > 0 && gcn_layers > 0 && gcn_hidden == 0) throw std::invalid_argument("gcn_hidden must be > 0");
}

ModelWeights::ModelWeights(const NetDims& dims) : dims_(dims) {
    dims.validate();
    std::size_t offset = 0;
    auto add = [&](std::string name, std::size_t rows, std::size_t cols, std::size_t fan_in) {
        tensors_.push_back({std::move(name), offset, rows, cols, fan_in});
        offset += rows * cols;
    };
    if (dims.uses_gcn()) {
        std::size_t in = dims.node_features;
        for (std::size_t l = 0; l < dims.gcn_layers; ++l) {
            const std::string p = "gcn." + std::to_string(l);
            add(p + ".weight", in, dims.gcn_hidden, in);
            add(p + ".bias", 1, dims.gcn_hidden, in);
            in = dims.gcn_hidden;
        }
    }
    const std::size_t h = dims.hidden_size;
    std::size_t in = dims.lstm_input_size();
    for (std::size_t l = 0; l < dims.lstm_layers; ++l) {
        const std::string p = "lstm." + std::to_string(l);
        add(p + ".w_input", 4 * h, in, in);
        add(p + ".w_hidden", 4 * h, h, h);
        add(p + ".bias", 4 * h, 1, h);
        in = h;
    }
    add("head.weight", dims.num_cells, h, h);
    add("head.bias", 1, dims.num_cells, h);
    values_.assign(offset, 0.0);
}

const TensorInfo& ModelWeights::tensor(std::string_view name) const {
    for (const auto& t : tensors_)
        if (t.name == name) return t;
    throw std::out_of_range("no tensor named " + std::string(name));
}

MatrixMap ModelWeights::matrix(std::string_view name) {
    const TensorInfo& t = tensor(name);
    return MatrixMap(values_.data() + t.offset, static_cast<Eigen::Index>(t.rows), static_cast<Eigen::Index>(t.cols));
}

ConstMatrixMap ModelWeights::matrix(std::string_view name) const {
    const TensorInfo& t = tensor(name);
    return ConstMatrixMap(values_.data() + t.offset, static_cast<Eigen::Index>(t.rows),
                          static_cast<Eigen::Index>(t.cols));
}

ModelWeights init_weights(const NetDims& dims, std::uint64_t seed) {
    ModelWeights w(dims);
    Rng rng(seed);
    auto v = w.values();
    for (const auto& t : w.tensors()) {
        const double a = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, t.fan_in)));
        for (std::size_t k = 0; k < t.size(); ++k) v[t.offset + k] = rng.uniform(-a, a);
    }
    return w;
}

nlohmann::json dims_to_json(const NetDims& d) {
    return {{"input_size", d.input_size},       {"hidden_size", d.hidden_size}, {"lstm_layers", d.lstm_layers},
            {"num_cells", d.num_cells},         {"node_features", d.node_features},
            {"gcn_hidden", d.gcn_hidden},       {"gcn_layers", d.gcn_layers}};
}

NetDims dims_from_json(const nlohmann::json& j) {
    NetDims d;
    d.input_size = j.at("input_size").get<std::size_t>();
    d.hidden_size = j.at("hidden_size").get<std::size_t>();
    d.lstm_layers = j.at("lstm_layers").get<std::size_t>();
    d.num_cells = j.at("num_cells").get<std::size_t>();
    d.node_features = j.at("node_features").get<std::size_t>();
    d.gcn_hidden = j.at("gcn_hidden").get<std::size_t>();
    d.gcn_layers = j.at("gcn_layers").get<std::size_t>();
    return d;
}

nlohmann::json weights_to_json(const ModelWeights& w) {
    nlohmann::json tensors = nlohmann::json::array();
    const auto v = w.values();
    for (const auto& t : w.tensors()) {
        std::vector<double> data(v.begin() + static_cast<std::ptrdiff_t>(t.offset),
                                 v.begin() + static_cast<std::ptrdiff_t>(t.offset + t.size()));
        tensors.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}, {"values", data}});
    }
    return {{"format", "aerotwin-weights"}, {"version", 1}, {"dims", dims_to_json(w.dims())}, {"tensors", tensors}};
}

ModelWeights weights_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "aerotwin-weights") throw std::invalid_argument("not a weights checkpoint");
    ModelWeights w(dims_from_json(j.at("dims")));
    const auto& tensors = j.at("tensors");
    if (tensors.size() != w.tensors().size()) throw std::invalid_argument("checkpoint tensor count mismatch");
    auto v = w.values();
    for (const auto& jt : tensors) {
        const TensorInfo& t = w.tensor(jt.at("name").get<std::string>());
        if (jt.at("rows").get<std::size_t>() != t.rows || jt.at("cols").get<std::size_t>() != t.cols)
            throw std::invalid_argument("checkpoint shape mismatch for " + t.name);
        const auto data = jt.at("values").get<std::vector<double>>();
        if (data.size() != t.size()) throw std::invalid_argument("checkpoint size mismatch for " + t.name);
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (!std::isfinite(data[k])) throw std::invalid_argument("non-finite weight in " + t.name);
            v[t.offset + k] = data[k];
        }
    }
    return w;
}

}  // namespace aerotwin
