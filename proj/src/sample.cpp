#include "rss/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rss {

namespace {

std::string cell_name(std::size_t slot, std::size_t cycle) {
    std::ostringstream os;
    os << "(slot " << slot + 1 << ", cycle " << cycle + 1 << ")";
    return os.str();
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, std::size_t line, std::size_t field) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        std::ostringstream os;
        os << "non-numeric cell '" << cell << "' at line " << line << ", field " << field;
        throw DataError(os.str());
    }
    return value;
}

}  // namespace

RssSample::RssSample(Grid<double> values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw DataError("sample must have at least one rank slot and one cycle");
    }
    struct Entry {
        double v;
        std::size_t slot, cycle;
    };
    std::vector<Entry> entries;
    entries.reserve(values_.rows() * values_.cols());
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        for (std::size_t l = 0; l < values_.cols(); ++l) {
            const double v = values_(i, l);
            if (!std::isfinite(v)) {
                throw DataError("non-finite value at " + cell_name(i, l));
            }
            entries.push_back({v, i, l});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.v < b.v; });
    for (std::size_t m = 1; m < entries.size(); ++m) {
        if (entries[m].v == entries[m - 1].v) {
            std::ostringstream os;
            os << "tie: " << cell_name(entries[m - 1].slot, entries[m - 1].cycle) << " and "
               << cell_name(entries[m].slot, entries[m].cycle) << " both equal " << entries[m].v
               << " (ties are not supported; jitter the data externally)";
            throw DataError(os.str());
        }
    }
}

RssSample RssSample::from_rows(const std::vector<std::vector<double>>& slot_rows) {
    if (slot_rows.empty() || slot_rows.front().empty()) {
        throw DataError("sample must have at least one rank slot and one cycle");
    }
    Grid<double> g(slot_rows.size(), slot_rows.front().size());
    for (std::size_t i = 0; i < slot_rows.size(); ++i) {
        if (slot_rows[i].size() != g.cols()) throw DataError("ragged sample rows");
        for (std::size_t l = 0; l < g.cols(); ++l) g(i, l) = slot_rows[i][l];
    }
    return RssSample(std::move(g));
}

ColumnProportions::ColumnProportions(std::size_t k, std::size_t n) : k_(k), n_(n), counts_(k * k * n, 0) {}

CsvLayout parse_layout(const std::string& name) {
    if (name == "cycles-as-rows") return CsvLayout::cycles_as_rows;
    if (name == "cycles-as-columns") return CsvLayout::cycles_as_columns;
    throw std::invalid_argument("unknown layout '" + name + "' (expected cycles-as-rows or cycles-as-columns)");
}

std::string to_string(CsvLayout layout) {
    return layout == CsvLayout::cycles_as_rows ? "cycles-as-rows" : "cycles-as-columns";
}

RssSample parse_csv(std::istream& in, CsvLayout layout) {
    std::vector<std::vector<double>> table;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (first_content && t.front() == '#') {
            first_content = false;
            continue;
        }
        first_content = false;
        std::vector<double> row;
        std::stringstream ss(t);
        std::string field;
        std::size_t field_no = 0;
        while (std::getline(ss, field, ',')) row.push_back(parse_number(field, line_no, ++field_no));
        if (t.back() == ',') row.push_back(parse_number("", line_no, ++field_no));
        if (!table.empty() && row.size() != table.front().size()) {
            std::ostringstream os;
            os << "ragged rows: line " << line_no << " has " << row.size() << " fields, expected "
               << table.front().size();
            throw DataError(os.str());
        }
        table.push_back(std::move(row));
    }
    if (table.empty()) throw DataError("empty table");

    const std::size_t rows = table.size();
    const std::size_t cols = table.front().size();
    const bool transpose = layout == CsvLayout::cycles_as_rows;
    const std::size_t k = transpose ? cols : rows;
    const std::size_t n = transpose ? rows : cols;
    if (k < 2) throw DataError("set size k must be at least 2");
    if (n < 1) throw DataError("need at least one cycle");

    Grid<double> g(k, n);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (transpose) g(c, r) = table[r][c];
            else g(r, c) = table[r][c];
        }
    }
    return RssSample(std::move(g));
}

RssSample parse_csv_text(const std::string& text, CsvLayout layout) {
    std::istringstream in(text);
    return parse_csv(in, layout);
}

RankInfo compute_ranks(const RssSample& s) {
    const std::size_t k = s.k();
    const std::size_t n = s.n();
    RankInfo r{Grid<int>(k, n), Grid<int>(k, n), Grid<int>(k, n)};

    std::vector<std::size_t> idx(k);
    for (std::size_t l = 0; l < n; ++l) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s(a, l) < s(b, l); });
        for (std::size_t pos = 0; pos < k; ++pos) r.within_cycle(idx[pos], l) = static_cast<int>(pos + 1);
    }

    std::vector<std::size_t> all(k * n);
    std::iota(all.begin(), all.end(), 0);
    std::sort(all.begin(), all.end(), [&](std::size_t a, std::size_t b) {
        return s(a / n, a % n) < s(b / n, b % n);
    });
    for (std::size_t pos = 0; pos < all.size(); ++pos) {
        r.overall(all[pos] / n, all[pos] % n) = static_cast<int>(pos + 1);
    }

    std::vector<std::size_t> cyc(n);
    for (std::size_t j = 0; j < k; ++j) {
        std::iota(cyc.begin(), cyc.end(), 0);
        std::sort(cyc.begin(), cyc.end(), [&](std::size_t a, std::size_t b) { return s(j, a) < s(j, b); });
        for (std::size_t pos = 0; pos < n; ++pos) r.column_counts(j, cyc[pos]) = static_cast<int>(pos);
    }
    return r;
}

ColumnProportions column_proportions(const RssSample& s) {
    const std::size_t k = s.k();
    const std::size_t n = s.n();
    ColumnProportions p(k, n);
    std::vector<std::vector<double>> sorted(k, std::vector<double>(n));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t l = 0; l < n; ++l) sorted[i][l] = s(i, l);
        std::sort(sorted[i].begin(), sorted[i].end());
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t l = 0; l < n; ++l) {
                const auto below = std::lower_bound(sorted[i].begin(), sorted[i].end(), s(j, l)) - sorted[i].begin();
                p.numerator(i, j, l) = static_cast<int>(below);
            }
        }
    }
    return p;
}

RssSample monotone_transform(const RssSample& s, const std::function<double(double)>& f) {
    Grid<double> g(s.k(), s.n());
    for (std::size_t i = 0; i < s.k(); ++i) {
        for (std::size_t l = 0; l < s.n(); ++l) g(i, l) = f(s(i, l));
    }
    RssSample out(std::move(g));
    // A map that is increasing on the observed values must preserve order.
    const auto before = compute_ranks(s);
    if (compute_ranks(out).overall != before.overall) {
        throw DataError("transform is not strictly increasing on the sample values");
    }
    return out;
}

}  // namespace rss
