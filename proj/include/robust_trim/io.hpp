#pragma once

#include "robust_trim/lts.hpp"
#include "robust_trim/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace robust_trim::io {

struct Table
{
    std::vector<std::string> names;
    Matrix values;
};

// Header row required, comma separated, '.' decimal point, no missing cells.
// Throws DataError on anything else.
Table read_csv(const std::filesystem::path& path);
Table parse_csv(const std::string& text);

struct LoadedData
{
    Dataset data;
    // One name per design column; "(Intercept)" first.
    std::vector<std::string> coefficient_names;
};

// Splits a table into design and response. With add_intercept the intercept
// column is prepended; otherwise the first predictor must already be all ones.
LoadedData to_dataset(const Table& table, const std::string& response, bool add_intercept);

// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::vector<double> to_std(const Vector& v);
// Trim indices shifted to 1-based.
std::vector<Index> one_based(const TrimSet& trim);

// Numeric array from a JSON fit report ("coefficients" by default).
Coefficients read_coefficients(const nlohmann::json& report, const std::string& key = "coefficients");

// One value per line, or a JSON array.
Coefficients read_vector_file(const std::filesystem::path& path);

} // namespace robust_trim::io
