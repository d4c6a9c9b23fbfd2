#include "qtrack/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace qtrack {
namespace {

// RFC-4180 field splitter for one record. `pos` is the record's first
// character; returns one past the terminating newline.
std::size_t split_record(const std::string& text, std::size_t pos,
                         std::vector<std::string>& fields, std::size_t line_no) {
    fields.clear();
    std::string field;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    pos += 2;
                } else {
                    quoted = false;
                    ++pos;
                }
            } else {
                field += c;
                ++pos;
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty())
                throw ParseError("line " + std::to_string(line_no) + ": stray quote in field");
            quoted = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            fields.push_back(std::move(field));
            return pos;
        } else {
            field += c;
            ++pos;
        }
    }
    if (quoted)
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(std::move(field));
    return pos;
}

double parse_price(const std::string& cell, std::size_t line_no, std::size_t col,
                   const std::string& origin) {
    if (cell.empty())
        throw ValidationError(origin + ": line " + std::to_string(line_no) + ", column " +
                              std::to_string(col + 1) + ": missing value");
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(origin + ": line " + std::to_string(line_no) + ", column " +
                         std::to_string(col + 1) + ": not a number: '" + cell + "'");
    if (!(value > 0.0))
        throw ValidationError(origin + ": line " + std::to_string(line_no) + ", column " +
                              std::to_string(col + 1) + ": non-positive price " + cell);
    return value;
}

}  // namespace

PricePanel parse_prices_csv(const std::string& csv_text, const std::string& index_column,
                            const std::string& origin) {
    std::vector<std::string> header;
    std::size_t pos = split_record(csv_text, 0, header, 1);
    if (header.size() < 2)
        throw ParseError(origin + ": header needs a date column and at least one ticker");
    if (header[0] != "date")
        throw ParseError(origin + ": first header column must be 'date', got '" + header[0] + "'");

    Eigen::Index index_col = -1;
    std::vector<std::string> tickers;
    std::vector<Eigen::Index> asset_cols;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c] == index_column) {
            if (index_col >= 0)
                throw ParseError(origin + ": duplicate index column '" + index_column + "'");
            index_col = static_cast<Eigen::Index>(c);
        } else {
            tickers.push_back(header[c]);
            asset_cols.push_back(static_cast<Eigen::Index>(c));
        }
    }
    {
        std::unordered_set<std::string> seen(tickers.begin(), tickers.end());
        if (seen.size() != tickers.size())
            throw ValidationError(origin + ": duplicate ticker in header");
    }
    if (tickers.empty())
        throw ParseError(origin + ": no asset columns besides the index");

    struct Row {
        std::string date;
        std::vector<double> values;  // header order, date excluded
    };
    std::vector<Row> rows;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    while (pos < csv_text.size()) {
        ++line_no;
        pos = split_record(csv_text, pos, fields, line_no);
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
        if (fields.size() != header.size())
            throw ParseError(origin + ": line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        Row row;
        row.date = fields[0];
        if (row.date.empty())
            throw ValidationError(origin + ": line " + std::to_string(line_no) + ": empty date");
        row.values.reserve(fields.size() - 1);
        for (std::size_t c = 1; c < fields.size(); ++c)
            row.values.push_back(parse_price(fields[c], line_no, c, origin));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InsufficientDataError(origin + ": no data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].date == rows[i - 1].date)
            throw ValidationError(origin + ": duplicate date " + rows[i].date);

    PricePanel panel;
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_assets = static_cast<Eigen::Index>(tickers.size());
    panel.asset_ids = std::move(tickers);
    panel.prices.resize(n_rows, n_assets);
    if (index_col >= 0) panel.index_prices.resize(n_rows);
    panel.dates.reserve(rows.size());
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        panel.dates.push_back(rows[r].date);
        for (Eigen::Index a = 0; a < n_assets; ++a)
            panel.prices(r, a) = rows[r].values[static_cast<std::size_t>(asset_cols[a] - 1)];
        if (index_col >= 0)
            panel.index_prices(r) = rows[r].values[static_cast<std::size_t>(index_col - 1)];
    }
    return panel;
}

PricePanel load_prices(const std::string& path, const std::string& index_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_prices_csv(buf.str(), index_column, path);
}

ReturnsPanel to_returns(const PricePanel& prices) {
    if (prices.rows() < 2)
        throw InsufficientDataError("to_returns: need at least 2 price rows, got " +
                                    std::to_string(prices.rows()));
    const Eigen::Index t_periods = prices.rows() - 1;
    ReturnsPanel panel;
    panel.asset_ids = prices.asset_ids;
    panel.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    panel.returns.resize(t_periods, prices.n_assets());
    for (Eigen::Index t = 0; t < t_periods; ++t)
        panel.returns.row(t) =
            prices.prices.row(t + 1).cwiseQuotient(prices.prices.row(t)).array() - 1.0;
    panel.has_index = prices.has_index();
    if (panel.has_index) {
        panel.index_returns.resize(t_periods);
        for (Eigen::Index t = 0; t < t_periods; ++t)
            panel.index_returns(t) = prices.index_prices(t + 1) / prices.index_prices(t) - 1.0;
    } else {
        panel.index_returns = Eigen::VectorXd::Zero(t_periods);
    }
    return panel;
}

namespace {

// Two-pass sample covariance over return rows [begin, begin+len).
// Fixed summation order keeps results bit-deterministic.
Eigen::MatrixXd window_covariance(const Eigen::MatrixXd& returns, Eigen::Index begin,
                                  Eigen::Index len) {
    const Eigen::Index n = returns.cols();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = 0; t < len; ++t) mean += returns.row(begin + t).transpose();
    mean /= static_cast<double>(len);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index t = 0; t < len; ++t) {
        const Eigen::VectorXd d = returns.row(begin + t).transpose() - mean;
        cov.noalias() += d * d.transpose();
    }
    cov /= static_cast<double>(len - 1);
    // d * d^T is symmetric in exact arithmetic but not always in floating
    // point once accumulated; canonicalize from the upper triangle.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) cov(j, i) = cov(i, j);
    return cov;
}

}  // namespace

CovarianceSet covariances(const ReturnsPanel& panel, int window) {
    const Eigen::Index t_periods = panel.n_periods();
    if (window < 2) throw ValidationError("covariances: window must be >= 2");
    if (window > t_periods)
        throw InsufficientDataError("covariances: window " + std::to_string(window) +
                                    " exceeds " + std::to_string(t_periods) + " periods");
    CovarianceSet set;
    set.window = window;
    set.full = window_covariance(panel.returns, 0, t_periods);
    const Eigen::Index n_windows = t_periods - window + 1;
    set.rolling.reserve(static_cast<std::size_t>(n_windows));
    for (Eigen::Index k = 0; k < n_windows; ++k)
        set.rolling.push_back(window_covariance(panel.returns, k, window));
    return set;
}

Eigen::VectorXd rolling_index_stdev(const ReturnsPanel& panel, int window) {
    const Eigen::Index t_periods = panel.n_periods();
    if (window < 2) throw ValidationError("rolling_index_stdev: window must be >= 2");
    if (window > t_periods)
        throw InsufficientDataError("rolling_index_stdev: window exceeds panel length");
    const Eigen::Index n_windows = t_periods - window + 1;
    Eigen::VectorXd per_window(n_windows);
    for (Eigen::Index k = 0; k < n_windows; ++k) {
        const auto seg = panel.index_returns.segment(k, window);
        const double mean = seg.mean();
        const double ss = (seg.array() - mean).square().sum();
        per_window(k) = std::sqrt(ss / static_cast<double>(window - 1));
    }
    Eigen::VectorXd out(t_periods);
    for (Eigen::Index t = 0; t < t_periods; ++t) {
        const Eigen::Index k = std::clamp<Eigen::Index>(t - (window - 1), 0, n_windows - 1);
        out(t) = per_window(k);
    }
    return out;
}

}  // namespace qtrack
