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

#ifndef AEROTWIN_CORE_GRID_HPP
#define AEROTWIN_CORE_GRID_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aerotwin {

using CellIndex = std::size_t;

struct Cell {
    int row = 0;
    int col = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

enum class Direction { north, south, east, west };

/// Discretized room. Cells are indexed row-major from 0; adjacency holds
/// unordered 4-neighbour pairs only (no diagonals).
class GridLayout {
public:
    using Pair = std::pair<CellIndex, CellIndex>;

    /// Full 4-connected lattice, every cell accessible.
    GridLayout(int rows, int cols, double cell_volume);

    /// `adjacency` must be a subset of the lattice's 4-neighbour pairs.
    GridLayout(int rows, int cols, double cell_volume, std::vector<bool> accessible,
               std::vector<Pair> adjacency);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t num_cells() const { return static_cast<std::size_t>(rows_) * cols_; }
    double cell_volume() const { return cell_volume_; }

    bool accessible(CellIndex i) const { return accessible_.at(i); }
    const std::vector<bool>& accessibility() const { return accessible_; }
    std::vector<CellIndex> accessible_cells() const;

    CellIndex index(Cell c) const;
    Cell cell(CellIndex i) const;
    bool contains(Cell c) const { return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_; }

    std::span<const CellIndex> neighbors(CellIndex i) const { return neighbors_.at(i); }
    bool adjacent(CellIndex a, CellIndex b) const;
    /// Unordered pairs with first < second, sorted lexicographically.
    const std::vector<Pair>& pairs() const { return pairs_; }

    /// Neighbour in a cardinal direction, if the grid links them.
    std::optional<CellIndex> facing(CellIndex i, Direction d) const;

    int manhattan(CellIndex a, CellIndex b) const;

    GridLayout with_blocked(std::span<const CellIndex> blocked) const;

    friend bool operator==(const GridLayout& a, const GridLayout& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cell_volume_ == b.cell_volume_ &&
               a.accessible_ == b.accessible_ && a.pairs_ == b.pairs_;
    }

private:
    void build();

    int rows_ = 0;
    int cols_ = 0;
    double cell_volume_ = 0.0;
    std::vector<bool> accessible_;
    std::vector<Pair> pairs_;
    std::vector<std::vector<CellIndex>> neighbors_;
};

/// 3x3 testbed, all cells open, 2 m^3 per cell.
GridLayout default_grid();

std::vector<GridLayout::Pair> lattice_pairs(int rows, int cols);

}  // namespace aerotwin

#endif
