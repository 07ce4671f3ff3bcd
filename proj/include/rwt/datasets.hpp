#pragma once

#include "rwt/estimation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rwt {

struct TwoSampleDataset {
    Sample sample1;
    Sample sample2;
    std::string label1 = "sample1";
    std::string label2 = "sample2";
    std::string source;
};

std::vector<std::string> bundled_dataset_names();
bool is_bundled_dataset(const std::string& name);
TwoSampleDataset bundled_dataset(const std::string& name);

/// Two-column CSV (optional header; the shorter column padded with trailing
/// blanks). Throws DomainError naming the line and column of a bad cell.
TwoSampleDataset parse_csv(std::istream& in, const std::string& source);

/// A bundled name, a two-column CSV path, or (when `second` is non-empty)
/// two one-column files.
TwoSampleDataset parse_dataset(const std::string& first, const std::string& second = "");

enum class RowTarget { Both, First, Second };

/// Removes the given 1-based rows.
TwoSampleDataset drop_rows(const TwoSampleDataset& data, const std::vector<int>& rows,
                           RowTarget target = RowTarget::Both);

/// FNV-1a over the exact bit patterns of both samples.
std::uint64_t dataset_checksum(const TwoSampleDataset& data);

}  // namespace rwt
