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

#include "aerotwin/core/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace aerotwin {

std::vector<GridLayout::Pair> lattice_pairs(int rows, int cols) {
    std::vector<GridLayout::Pair> out;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const CellIndex i = static_cast<CellIndex>(r * cols + c);
            if (c + 1 < cols) out.emplace_back(i, i + 1);
            if (r + 1 < rows) out.emplace_back(i, i + static_cast<CellIndex>(cols));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GridLayout::GridLayout(int rows, int cols, double cell_volume)
    : GridLayout(rows, cols, cell_volume, {}, lattice_pairs(rows, cols)) {}

GridLayout::GridLayout(int rows, int cols, double cell_volume, std::vector<bool> accessible,
                       std::vector<Pair> adjacency)
    : rows_(rows), cols_(cols), cell_volume_(cell_volume), accessible_(std::move(accessible)),
      pairs_(std::move(adjacency)) {
    if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("grid must have at least one row and column");
    if (!(cell_volume_ > 0.0)) throw std::invalid_argument("cell_volume must be positive");
    if (accessible_.empty()) accessible_.assign(num_cells(), true);
    if (accessible_.size() != num_cells())
        throw std::invalid_argument("accessibility mask has wrong length");
    build();
}

void GridLayout::build() {
    const std::size_t n = num_cells();
    for (auto& p : pairs_) {
        if (p.first > p.second) std::swap(p.first, p.second);
        if (p.second >= n) throw std::invalid_argument("adjacency references a cell outside the grid");
        const Cell a = cell(p.first);
        const Cell b = cell(p.second);
        const int d = std::abs(a.row - b.row) + std::abs(a.col - b.col);
        if (d != 1)
            throw std::invalid_argument("adjacency pair (" + std::to_string(p.first) + "," +
                                        std::to_string(p.second) + ") is not a 4-neighbour pair");
    }
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());

    neighbors_.assign(n, {});
    for (const auto& [a, b] : pairs_) {
        neighbors_[a].push_back(b);
        neighbors_[b].push_back(a);
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

std::vector<CellIndex> GridLayout::accessible_cells() const {
    std::vector<CellIndex> out;
    for (CellIndex i = 0; i < num_cells(); ++i)
        if (accessible_[i]) out.push_back(i);
    return out;
}

CellIndex GridLayout::index(Cell c) const {
    if (!contains(c))
        throw std::out_of_range("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                                ") is outside the grid");
    return static_cast<CellIndex>(c.row * cols_ + c.col);
}

Cell GridLayout::cell(CellIndex i) const {
    if (i >= num_cells()) throw std::out_of_range("cell index " + std::to_string(i) + " outside the grid");
    return {static_cast<int>(i) / cols_, static_cast<int>(i) % cols_};
}

bool GridLayout::adjacent(CellIndex a, CellIndex b) const {
    if (a >= num_cells() || b >= num_cells()) return false;
    const auto& nb = neighbors_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::optional<CellIndex> GridLayout::facing(CellIndex i, Direction d) const {
    Cell c = cell(i);
    switch (d) {
        case Direction::north: --c.row; break;
        case Direction::south: ++c.row; break;
        case Direction::east: ++c.col; break;
        case Direction::west: --c.col; break;
    }
    if (!contains(c)) return std::nullopt;
    const CellIndex j = index(c);
    if (!adjacent(i, j)) return std::nullopt;
    return j;
}

int GridLayout::manhattan(CellIndex a, CellIndex b) const {
    const Cell ca = cell(a);
    const Cell cb = cell(b);
    return std::abs(ca.row - cb.row) + std::abs(ca.col - cb.col);
}

GridLayout GridLayout::with_blocked(std::span<const CellIndex> blocked) const {
    std::vector<bool> acc = accessible_;
    for (CellIndex i : blocked) acc.at(i) = false;
    return GridLayout(rows_, cols_, cell_volume_, std::move(acc), pairs_);
}

GridLayout default_grid() { return GridLayout(3, 3, 2.0); }

}  // namespace aerotwin
