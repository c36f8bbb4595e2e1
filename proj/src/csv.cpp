#include "iforest/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <system_error>

namespace iforest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t line_no) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw DataError("line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(field) + "' as a number");
    return value;
}

// Numeric rows, all with the same column count; returns (values, rows, cols).
FeatureTable parse_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    FeatureTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#') continue;

        std::size_t cols = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = row.find(',', start);
            const std::string_view field =
                row.substr(start, comma == std::string_view::npos ? comma : comma - start);
            table.values.push_back(parse_field(field, line_no));
            ++cols;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (table.rows == 0)
            table.cols = cols;
        else if (cols != table.cols)
            throw DataError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.cols) + " columns, found " +
                            std::to_string(cols));
        ++table.rows;
    }
    if (table.rows == 0) throw DataError("'" + path + "' contains no data rows");
    return table;
}

} // namespace

Dataset load_dataset_csv(const std::string& path) {
    FeatureTable table = parse_table(path);
    if (table.cols < 2)
        throw DataError("'" + path + "' needs at least one feature column plus a label column");

    const std::size_t dim = table.cols - 1;
    std::vector<double> features;
    features.reserve(table.rows * dim);
    std::vector<std::uint8_t> labels;
    labels.reserve(table.rows);

    for (std::size_t r = 0; r < table.rows; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double v = table.values[r * table.cols + c];
            if (!std::isfinite(v))
                throw DataError("row " + std::to_string(r + 1) + ": non-finite feature value");
            features.push_back(v);
        }
        const double l = table.values[r * table.cols + dim];
        if (l != 0.0 && l != 1.0)
            throw DataError("row " + std::to_string(r + 1) + ": label must be 0 or 1");
        labels.push_back(static_cast<std::uint8_t>(l));
    }
    return Dataset(std::move(features), std::move(labels), dim);
}

FeatureTable load_feature_table_csv(const std::string& path) {
    FeatureTable table = parse_table(path);
    for (double v : table.values)
        if (!std::isfinite(v)) throw DataError("'" + path + "' contains a non-finite value");
    return table;
}

std::string format_double(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw Error("double formatting failed");
    return std::string(buf, ptr);
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    out << "#";
    for (std::size_t j = 0; j < data.dimension(); ++j) out << " x" << j << ",";
    out << " label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.row(i);
        for (double v : row) out << format_double(v) << ",";
        out << data.label(i) << "\n";
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace iforest
