#pragma once

// Balanced ranked set samples and the rank bookkeeping every test
// statistic is built from.
//
// Indexing: the C++ API is 0-based (slot i in [0,k), cycle l in [0,n)).
// Rank *values* (within-cycle and overall) are 1-based as in the usual
// definitions. File formats and CLI output are 1-based throughout.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "rss/errors.hpp"

namespace rss {

// Dense k x n grid stored slot-major.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

// Measured BRSS values X_[i]l, i = rank slot, l = cycle.
// Immutable; construction validates finiteness and pairwise distinctness.
class RssSample {
public:
    explicit RssSample(Grid<double> values);

    // Convenience: rows are rank slots, columns are cycles.
    static RssSample from_rows(const std::vector<std::vector<double>>& slot_rows);

    std::size_t k() const { return values_.rows(); }
    std::size_t n() const { return values_.cols(); }
    double operator()(std::size_t slot, std::size_t cycle) const { return values_(slot, cycle); }
    const Grid<double>& values() const { return values_; }

    friend bool operator==(const RssSample&, const RssSample&) = default;

private:
    Grid<double> values_;
};

struct RankInfo {
    Grid<int> within_cycle;   // R_il in 1..k
    Grid<int> overall;        // R_[j]l in 1..kn
    Grid<int> column_counts;  // c_jl = #{l' : X_[j]l' < X_[j]l}

    friend bool operator==(const RankInfo&, const RankInfo&) = default;
};

// p_i(j,l) = numerator(i,j,l) / n, the share of column i lying below X_[j]l.
class ColumnProportions {
public:
    ColumnProportions(std::size_t k, std::size_t n);

    std::size_t k() const { return k_; }
    std::size_t n() const { return n_; }

    int numerator(std::size_t column, std::size_t slot, std::size_t cycle) const {
        return counts_[(column * k_ + slot) * n_ + cycle];
    }
    int& numerator(std::size_t column, std::size_t slot, std::size_t cycle) {
        return counts_[(column * k_ + slot) * n_ + cycle];
    }
    double value(std::size_t column, std::size_t slot, std::size_t cycle) const {
        return static_cast<double>(numerator(column, slot, cycle)) / static_cast<double>(n_);
    }

private:
    std::size_t k_;
    std::size_t n_;
    std::vector<int> counts_;
};

enum class CsvLayout { cycles_as_rows, cycles_as_columns };

CsvLayout parse_layout(const std::string& name);
std::string to_string(CsvLayout layout);

// Plain comma-separated decimals; an optional first line starting with '#'
// is ignored. Requires k >= 2 and n >= 1 after orientation.
RssSample parse_csv(std::istream& in, CsvLayout layout);
RssSample parse_csv_text(const std::string& text, CsvLayout layout);

RankInfo compute_ranks(const RssSample& sample);
ColumnProportions column_proportions(const RssSample& sample);

RssSample monotone_transform(const RssSample& sample, const std::function<double(double)>& f);

}  // namespace rss
