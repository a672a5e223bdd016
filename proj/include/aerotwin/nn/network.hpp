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

#ifndef AEROTWIN_NN_NETWORK_HPP
#define AEROTWIN_NN_NETWORK_HPP

#include <span>
#include <stdexcept>

#include "aerotwin/core/grid.hpp"
#include "aerotwin/nn/weights.hpp"

namespace aerotwin {

/// Raised when an activation or the loss stops being finite.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// D^-1/2 (A + I) D^-1/2 over the grid's adjacency.
RowMatrix normalized_adjacency(const GridLayout& grid);

struct SequenceInput {
    RowMatrix frames;  // steps x input_size
    RowMatrix nodes;   // steps x (num_cells * node_features); empty without graph layers
};

struct TrainingSample {
    SequenceInput input;
    RowMatrix target;  // steps x num_cells
};

struct ForwardResult {
    RowMatrix hidden;   // steps x hidden_size, top LSTM layer
    RowMatrix outputs;  // steps x num_cells
};

/// Graph layers only: ReLU(A_hat H W + b), stacked.
RowMatrix gcn_forward(const ModelWeights& w, const RowMatrix& node_features, const RowMatrix& adjacency);

/// Graph layers per step, LSTM stack from zero state, linear head.
ForwardResult network_forward(const ModelWeights& w, const SequenceInput& in, const RowMatrix& adjacency);

/// Mean squared error over every output entry of every sample.
double mse_loss(const ModelWeights& w, std::span<const TrainingSample> batch, const RowMatrix& adjacency);

/// Same loss, with its exact gradient written to `grad` (size w.size()).
double loss_and_gradient(const ModelWeights& w, std::span<const TrainingSample> batch, const RowMatrix& adjacency,
                         std::span<double> grad);

}  // namespace aerotwin

#endif
