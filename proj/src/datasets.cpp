#include "rwt/datasets.hpp"

#include "rwt/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace rwt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

bool parse_number(const std::string& cell, double& value) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last && std::isfinite(value);
}

std::string where(const std::string& source, std::size_t line, std::size_t column) {
    std::ostringstream os;
    os << source << ":" << line << ": column " << column;
    return os.str();
}

}  // namespace

std::vector<std::string> bundled_dataset_names() {
    return {"adverse-events", "platelet", "lifetimes"};
}

bool is_bundled_dataset(const std::string& name) {
    const auto names = bundled_dataset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

TwoSampleDataset bundled_dataset(const std::string& name) {
    TwoSampleDataset d;
    d.source = "bundled:" + name;
    if (name == "adverse-events") {
        // Counts of 19 adverse event types, treatment vs placebo arm.
        d.label1 = "treatment";
        d.label2 = "control";
        d.sample1 = {91, 49, 19, 12, 12, 3, 13, 10, 6, 3, 3, 7, 6, 5, 4, 4, 3, 2, 0};
        d.sample2 = {109, 58, 20, 13, 10, 10, 6, 4, 5, 7, 5, 1, 2, 4, 4, 5, 2, 2, 1};
    } else if (name == "platelet") {
        // Infant platelet counts (thousands per mm³) after delivery.
        d.label1 = "treatment";
        d.label2 = "control";
        d.sample1 = {120, 124, 215, 90, 67, 126, 95, 190, 180, 135, 399, 65};
        d.sample2 = {12, 20, 112, 32, 60, 40, 18};
    } else if (name == "lifetimes") {
        // Component lifetimes (thousands of hours) from two processes.
        d.label1 = "process1";
        d.label2 = "process2";
        d.sample1 = {.044, .134, .142, .158, .216, .625, .649, .658, 1.062, 1.140, 1.159, 1.238};
        d.sample2 = {.060, .174, .237, .272, .335, .391, .670, .902, 1.543, 1.615, 2.013, 2.309};
    } else {
        throw DomainError("unknown bundled dataset '" + name + "'");
    }
    return d;
}

TwoSampleDataset parse_csv(std::istream& in, const std::string& source) {
    TwoSampleDataset d;
    d.source = source;
    std::vector<Sample*> columns{&d.sample1, &d.sample2};
    std::vector<bool> ended(2, false);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> cells = split_row(line);
        if (width == 0) {
            width = cells.size();
            if (width < 1 || width > 2) {
                throw DomainError(source + ":" + std::to_string(line_no) +
                                  ": expected one or two columns, found " + std::to_string(width));
            }
            double probe;
            if (!header_seen && !parse_number(cells[0], probe)) {
                header_seen = true;
                d.label1 = cells[0].empty() ? d.label1 : cells[0];
                if (width == 2 && !cells[1].empty()) {
                    d.label2 = cells[1];
                }
                continue;
            }
        }
        if (cells.size() > width) {
            throw DomainError(where(source, line_no, width + 1) + ": unexpected extra cell");
        }
        cells.resize(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (cells[c].empty()) {
                ended[c] = true;
                continue;
            }
            if (ended[c]) {
                throw DomainError(where(source, line_no, c + 1) +
                                  ": value after a blank cell (only trailing blanks are allowed)");
            }
            double v;
            if (!parse_number(cells[c], v)) {
                throw DomainError(where(source, line_no, c + 1) + ": malformed number '" +
                                  cells[c] + "'");
            }
            columns[c]->push_back(v);
        }
    }
    if (d.sample1.empty() || (width == 2 && d.sample2.empty())) {
        throw DomainError(source + ": empty sample");
    }
    return d;
}

TwoSampleDataset parse_dataset(const std::string& first, const std::string& second) {
    if (second.empty() && is_bundled_dataset(first)) {
        return bundled_dataset(first);
    }
    auto load = [](const std::string& path) {
        std::ifstream f(path);
        if (!f) {
            throw DomainError("cannot open data file '" + path + "'");
        }
        return parse_csv(f, path);
    };
    TwoSampleDataset a = load(first);
    if (second.empty()) {
        if (a.sample2.empty()) {
            throw DomainError(first + ": need two columns or a second file");
        }
        return a;
    }
    const TwoSampleDataset b = load(second);
    if (!a.sample2.empty() || !b.sample2.empty()) {
        throw DomainError("with two data files each must have a single column");
    }
    a.sample2 = b.sample1;
    a.label2 = b.label1 == "sample1" ? "sample2" : b.label1;
    a.source = first + "+" + second;
    return a;
}

TwoSampleDataset drop_rows(const TwoSampleDataset& data, const std::vector<int>& rows,
                           RowTarget target) {
    const std::set<int> drop(rows.begin(), rows.end());
    auto filter = [&](const Sample& s) {
        for (int r : drop) {
            if (r < 1 || static_cast<std::size_t>(r) > s.size()) {
                throw DomainError("row " + std::to_string(r) + " is out of range");
            }
        }
        Sample out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!drop.count(static_cast<int>(i) + 1)) {
                out.push_back(s[i]);
            }
        }
        return out;
    };
    TwoSampleDataset d = data;
    if (target != RowTarget::Second) {
        d.sample1 = filter(data.sample1);
    }
    if (target != RowTarget::First) {
        d.sample2 = filter(data.sample2);
    }
    if (d.sample1.empty() || d.sample2.empty()) {
        throw DomainError("dropping rows left an empty sample");
    }
    return d;
}

std::uint64_t dataset_checksum(const TwoSampleDataset& data) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    for (const Sample* s : {&data.sample1, &data.sample2}) {
        feed(s->size());
        for (double v : *s) {
            feed(std::bit_cast<std::uint64_t>(v));
        }
    }
    return h;
}

}  // namespace rwt
