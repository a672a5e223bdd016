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

#include "aerotwin/nn/network.hpp"

#include <cmath>
#include <string>

namespace aerotwin {

namespace {

using Index = Eigen::Index;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Index ix(std::size_t v) { return static_cast<Index>(v); }

ConstMatrixMap view(std::span<const double> v, const TensorInfo& t) {
    return ConstMatrixMap(v.data() + t.offset, ix(t.rows), ix(t.cols));
}

MatrixMap view(std::span<double> v, const TensorInfo& t) { return MatrixMap(v.data() + t.offset, ix(t.rows), ix(t.cols)); }

struct Layout {
    std::vector<const TensorInfo*> gcn_w, gcn_b, w_in, w_h, bias;
    const TensorInfo* head_w = nullptr;
    const TensorInfo* head_b = nullptr;

    explicit Layout(const ModelWeights& w) {
        const NetDims& d = w.dims();
        if (d.uses_gcn())
            for (std::size_t l = 0; l < d.gcn_layers; ++l) {
                const std::string p = "gcn." + std::to_string(l);
                gcn_w.push_back(&w.tensor(p + ".weight"));
                gcn_b.push_back(&w.tensor(p + ".bias"));
            }
        for (std::size_t l = 0; l < d.lstm_layers; ++l) {
            const std::string p = "lstm." + std::to_string(l);
            w_in.push_back(&w.tensor(p + ".w_input"));
            w_h.push_back(&w.tensor(p + ".w_hidden"));
            bias.push_back(&w.tensor(p + ".bias"));
        }
        head_w = &w.tensor("head.weight");
        head_b = &w.tensor("head.bias");
    }
};

struct Tape {
    // [step][layer]
    std::vector<std::vector<RowMatrix>> gcn_ah, gcn_z;
    // [layer]: inputs (steps x in), activated gates (steps x 4H), cell, tanh(cell), hidden
    std::vector<RowMatrix> x, gates, cell, tcell, hidden;
    RowMatrix outputs;
};

RowMatrix gcn_stack(const ModelWeights& w, const Layout& L, ConstMatrixMap h0, const RowMatrix& adj,
                    std::vector<RowMatrix>* ah_out, std::vector<RowMatrix>* z_out) {
    const auto v = w.values();
    RowMatrix h = h0;
    for (std::size_t l = 0; l < L.gcn_w.size(); ++l) {
        RowMatrix ah = adj * h;
        RowMatrix z = ah * view(v, *L.gcn_w[l]);
        z.rowwise() += view(v, *L.gcn_b[l]).row(0);
        h = z.cwiseMax(0.0);
        if (ah_out) ah_out->push_back(std::move(ah));
        if (z_out) z_out->push_back(std::move(z));
    }
    return h;
}

void check_input(const NetDims& d, const SequenceInput& in, const RowMatrix& adj) {
    if (in.frames.rows() == 0) throw std::invalid_argument("empty sequence");
    if (in.frames.cols() != ix(d.input_size)) throw std::invalid_argument("frame width does not match input_size");
    if (d.uses_gcn()) {
        if (in.nodes.rows() != in.frames.rows() || in.nodes.cols() != ix(d.num_cells * d.node_features))
            throw std::invalid_argument("node feature block has the wrong shape");
        if (adj.rows() != ix(d.num_cells) || adj.cols() != ix(d.num_cells))
            throw std::invalid_argument("adjacency does not match num_cells");
    }
}

void forward(const ModelWeights& w, const Layout& L, const SequenceInput& in, const RowMatrix& adj, Tape& tape) {
    const NetDims& d = w.dims();
    check_input(d, in, adj);
    const auto v = w.values();
    const Index steps = in.frames.rows();
    const Index n = ix(d.num_cells);
    const Index hsz = ix(d.hidden_size);

    RowMatrix x0(steps, ix(d.lstm_input_size()));
    x0.leftCols(ix(d.input_size)) = in.frames;
    if (d.uses_gcn()) {
        const Index nf = ix(d.node_features);
        const Index g = ix(d.gcn_hidden);
        tape.gcn_ah.assign(static_cast<std::size_t>(steps), {});
        tape.gcn_z.assign(static_cast<std::size_t>(steps), {});
        for (Index t = 0; t < steps; ++t) {
            const ConstMatrixMap h0(in.nodes.data() + t * n * nf, n, nf);
            const RowMatrix e = gcn_stack(w, L, h0, adj, &tape.gcn_ah[static_cast<std::size_t>(t)],
                                          &tape.gcn_z[static_cast<std::size_t>(t)]);
            x0.row(t).tail(n * g) = Eigen::Map<const Eigen::RowVectorXd>(e.data(), n * g);
        }
    }

    tape.x.clear();
    tape.gates.clear();
    tape.cell.clear();
    tape.tcell.clear();
    tape.hidden.clear();
    tape.x.push_back(std::move(x0));
    for (std::size_t l = 0; l < d.lstm_layers; ++l) {
        const ConstMatrixMap wi = view(v, *L.w_in[l]);
        const ConstMatrixMap wh = view(v, *L.w_h[l]);
        const ConstMatrixMap b = view(v, *L.bias[l]);
        RowMatrix pre = tape.x[l] * wi.transpose();
        pre.rowwise() += b.col(0).transpose();
        RowMatrix gates(steps, 4 * hsz), cell(steps, hsz), tcell(steps, hsz), hidden(steps, hsz);
        Eigen::VectorXd h = Eigen::VectorXd::Zero(hsz), c = Eigen::VectorXd::Zero(hsz);
        Eigen::VectorXd a(4 * hsz);
        for (Index t = 0; t < steps; ++t) {
            a.noalias() = wh * h;
            a += pre.row(t).transpose();
            for (Index k = 0; k < hsz; ++k) {
                const double ig = sigmoid(a[k]);
                const double fg = sigmoid(a[hsz + k]);
                const double gg = std::tanh(a[2 * hsz + k]);
                const double og = sigmoid(a[3 * hsz + k]);
                c[k] = fg * c[k] + ig * gg;
                const double tc = std::tanh(c[k]);
                h[k] = og * tc;
                gates(t, k) = ig;
                gates(t, hsz + k) = fg;
                gates(t, 2 * hsz + k) = gg;
                gates(t, 3 * hsz + k) = og;
                tcell(t, k) = tc;
            }
            cell.row(t) = c.transpose();
            hidden.row(t) = h.transpose();
        }
        tape.gates.push_back(std::move(gates));
        tape.cell.push_back(std::move(cell));
        tape.tcell.push_back(std::move(tcell));
        tape.hidden.push_back(hidden);
        if (l + 1 < d.lstm_layers) tape.x.push_back(std::move(hidden));
    }
    tape.outputs = tape.hidden.back() * view(v, *L.head_w).transpose();
    tape.outputs.rowwise() += view(v, *L.head_b).row(0);
    if (!tape.outputs.allFinite()) throw DivergenceError("non-finite network output");
}

void backward(const ModelWeights& w, const Layout& L, const RowMatrix& adj, const Tape& tape, const RowMatrix& dy,
              std::span<double> grad) {
    const NetDims& d = w.dims();
    const auto v = w.values();
    const Index steps = dy.rows();
    const Index hsz = ix(d.hidden_size);

    view(grad, *L.head_w).noalias() += dy.transpose() * tape.hidden.back();
    view(grad, *L.head_b).row(0) += dy.colwise().sum();
    RowMatrix dh_seq = dy * view(v, *L.head_w);

    for (std::size_t li = d.lstm_layers; li-- > 0;) {
        const RowMatrix& gates = tape.gates[li];
        const RowMatrix& cell = tape.cell[li];
        const RowMatrix& tcell = tape.tcell[li];
        const ConstMatrixMap wh = view(v, *L.w_h[li]);
        RowMatrix da(steps, 4 * hsz);
        Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(hsz), dc_next = Eigen::VectorXd::Zero(hsz);
        for (Index t = steps; t-- > 0;) {
            for (Index k = 0; k < hsz; ++k) {
                const double ig = gates(t, k), fg = gates(t, hsz + k), gg = gates(t, 2 * hsz + k),
                             og = gates(t, 3 * hsz + k);
                const double tc = tcell(t, k);
                const double c_prev = t > 0 ? cell(t - 1, k) : 0.0;
                const double dh = dh_seq(t, k) + dh_next[k];
                const double dc = dc_next[k] + dh * og * (1.0 - tc * tc);
                da(t, k) = dc * gg * ig * (1.0 - ig);
                da(t, hsz + k) = dc * c_prev * fg * (1.0 - fg);
                da(t, 2 * hsz + k) = dc * ig * (1.0 - gg * gg);
                da(t, 3 * hsz + k) = dh * tc * og * (1.0 - og);
                dc_next[k] = dc * fg;
            }
            dh_next.noalias() = wh.transpose() * da.row(t).transpose();
        }
        view(grad, *L.w_in[li]).noalias() += da.transpose() * tape.x[li];
        if (steps > 1)
            view(grad, *L.w_h[li]).noalias() +=
                da.bottomRows(steps - 1).transpose() * tape.hidden[li].topRows(steps - 1);
        view(grad, *L.bias[li]).col(0) += da.colwise().sum().transpose();
        if (li > 0 || d.uses_gcn()) dh_seq = da * view(v, *L.w_in[li]);
    }

    if (!d.uses_gcn()) return;
    const Index n = ix(d.num_cells);
    const Index g = ix(d.gcn_hidden);
    const Index off = ix(d.input_size);
    for (Index t = 0; t < steps; ++t) {
        const auto& ah = tape.gcn_ah[static_cast<std::size_t>(t)];
        const auto& zs = tape.gcn_z[static_cast<std::size_t>(t)];
        RowMatrix dh = Eigen::Map<const RowMatrix>(dh_seq.row(t).data() + off, n, g);
        for (std::size_t l = L.gcn_w.size(); l-- > 0;) {
            const RowMatrix dz = (zs[l].array() > 0.0).select(dh.array(), 0.0).matrix();
            view(grad, *L.gcn_w[l]).noalias() += ah[l].transpose() * dz;
            view(grad, *L.gcn_b[l]).row(0) += dz.colwise().sum();
            if (l > 0) dh = adj.transpose() * (dz * view(v, *L.gcn_w[l]).transpose());
        }
    }
}

std::size_t total_outputs(const ModelWeights& w, std::span<const TrainingSample> batch) {
    std::size_t total = 0;
    for (const auto& s : batch) {
        if (s.target.rows() != s.input.frames.rows() || s.target.cols() != ix(w.dims().num_cells))
            throw std::invalid_argument("target shape does not match the sequence");
        total += static_cast<std::size_t>(s.target.size());
    }
    if (total == 0) throw std::invalid_argument("empty batch");
    return total;
}

}  // namespace

RowMatrix normalized_adjacency(const GridLayout& grid) {
    const Index n = ix(grid.num_cells());
    RowMatrix a = RowMatrix::Identity(n, n);
    for (const auto& [i, j] : grid.pairs()) {
        a(ix(i), ix(j)) = 1.0;
        a(ix(j), ix(i)) = 1.0;
    }
    const Eigen::VectorXd dinv = a.rowwise().sum().array().rsqrt();
    return dinv.asDiagonal() * a * dinv.asDiagonal();
}

RowMatrix gcn_forward(const ModelWeights& w, const RowMatrix& node_features, const RowMatrix& adjacency) {
    const NetDims& d = w.dims();
    if (!d.uses_gcn()) throw std::invalid_argument("model has no graph layers");
    if (node_features.rows() != ix(d.num_cells) || node_features.cols() != ix(d.node_features))
        throw std::invalid_argument("node features have the wrong shape");
    if (adjacency.rows() != ix(d.num_cells) || adjacency.cols() != ix(d.num_cells))
        throw std::invalid_argument("adjacency does not match num_cells");
    const Layout L(w);
    const ConstMatrixMap h0(node_features.data(), node_features.rows(), node_features.cols());
    return gcn_stack(w, L, h0, adjacency, nullptr, nullptr);
}

ForwardResult network_forward(const ModelWeights& w, const SequenceInput& in, const RowMatrix& adjacency) {
    const Layout L(w);
    Tape tape;
    forward(w, L, in, adjacency, tape);
    return {std::move(tape.hidden.back()), std::move(tape.outputs)};
}

double mse_loss(const ModelWeights& w, std::span<const TrainingSample> batch, const RowMatrix& adjacency) {
    const std::size_t total = total_outputs(w, batch);
    const Layout L(w);
    Tape tape;
    double sse = 0.0;
    for (const auto& s : batch) {
        forward(w, L, s.input, adjacency, tape);
        sse += (tape.outputs - s.target).squaredNorm();
    }
    const double loss = sse / static_cast<double>(total);
    if (!std::isfinite(loss)) throw DivergenceError("non-finite loss");
    return loss;
}

double loss_and_gradient(const ModelWeights& w, std::span<const TrainingSample> batch, const RowMatrix& adjacency,
                         std::span<double> grad) {
    if (grad.size() != w.size()) throw std::invalid_argument("gradient buffer has the wrong size");
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t total = total_outputs(w, batch);
    const double scale = 2.0 / static_cast<double>(total);
    const Layout L(w);
    Tape tape;
    double sse = 0.0;
    for (const auto& s : batch) {
        forward(w, L, s.input, adjacency, tape);
        const RowMatrix err = tape.outputs - s.target;
        sse += err.squaredNorm();
        backward(w, L, adjacency, tape, scale * err, grad);
    }
    const double loss = sse / static_cast<double>(total);
    if (!std::isfinite(loss)) throw DivergenceError("non-finite loss");
    return loss;
}

}  // namespace aerotwin
