#include "robust_trim/io.hpp"

#include "robust_trim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace robust_trim::io {

namespace {

std::string trim_ws(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ','))
        cells.push_back(trim_ws(cell));
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col)
{
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                        ": expected a finite number, got '" + cell + "'");
    return v;
}

} // namespace

Table parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    Table t;
    if (!std::getline(in, line))
        throw DataError("empty CSV: a header row is required");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF)
        line.erase(0, 3); // UTF-8 BOM
    t.names = split_row(line);
    if (t.names.empty() || std::any_of(t.names.begin(), t.names.end(), [](const auto& s) { return s.empty(); }))
        throw DataError("header row has empty column names");

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_ws(line).empty())
            continue;
        const auto cells = split_row(line);
        if (cells.size() != t.names.size())
            throw DataError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(t.names.size()));
        std::vector<double> r(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            r[c] = parse_number(cells[c], line_no, c);
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw DataError("CSV has no data rows");
    t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return t;
}

Table read_csv(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

LoadedData to_dataset(const Table& table, const std::string& response, bool add_intercept)
{
    Index resp = table.values.cols() - 1;
    if (!response.empty()) {
        const auto it = std::find(table.names.begin(), table.names.end(), response);
        if (it == table.names.end())
            throw DataError("response column '" + response + "' not found");
        resp = static_cast<Index>(it - table.names.begin());
    }
    const Index n = table.values.rows();
    Matrix features(n, table.values.cols() - 1);
    std::vector<std::string> names;
    if (add_intercept)
        names.emplace_back("(Intercept)");
    Index k = 0;
    for (Index j = 0; j < table.values.cols(); ++j) {
        if (j == resp)
            continue;
        features.col(k++) = table.values.col(j);
        names.push_back(table.names[static_cast<std::size_t>(j)]);
    }
    Vector y = table.values.col(resp);
    try {
        if (add_intercept)
            return {Dataset::with_intercept(features, std::move(y)), std::move(names)};
        return {Dataset(std::move(features), std::move(y)), std::move(names)};
    } catch (const InvalidArgument& e) {
        throw DataError(e.what());
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw DataError("cannot write '" + tmp.string() + "'");
        f << content;
        if (!f.flush())
            throw DataError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError("cannot move output into '" + path.string() + "': " + ec.message());
    }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Index> one_based(const TrimSet& trim)
{
    std::vector<Index> out(trim.indices());
    for (auto& i : out)
        ++i;
    return out;
}

Coefficients read_coefficients(const nlohmann::json& report, const std::string& key)
{
    if (!report.contains(key) || !report[key].is_array())
        throw DataError("fit report has no '" + key + "' array");
    const auto& arr = report[key];
    Coefficients b(static_cast<Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw DataError("non-numeric entry in '" + key + "'");
        b[static_cast<Index>(i)] = arr[i].get<double>();
    }
    return b;
}

Coefficients read_vector_file(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f)
        throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            const auto j = nlohmann::json::parse(text);
            nlohmann::json wrapped = {{"values", j}};
            return read_coefficients(wrapped, "values");
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("bad JSON vector: ") + e.what());
        }
    }
    std::vector<double> vals;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string cell = trim_ws(line);
        if (cell.empty() || cell[0] == '#')
            continue;
        vals.push_back(parse_number(cell, line_no, 0));
    }
    if (vals.empty())
        throw DataError("'" + path.string() + "' holds no values");
    return Eigen::Map<Vector>(vals.data(), static_cast<Index>(vals.size()));
}

} // namespace robust_trim::io
