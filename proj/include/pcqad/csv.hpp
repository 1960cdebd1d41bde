#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "pcqad/errors.hpp"

namespace pcqad {

/// Deterministic CSV writer; numbers at 12 significant digits so re-ingestion
/// is bit-stable across runs.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_)
            throw ResourceError("cannot open for writing: " + path);
    }

    void header(const std::vector<std::string>& names) {
        for (size_t i = 0; i < names.size(); ++i)
            out_ << (i ? "," : "") << names[i];
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        char buf[32];
        for (size_t i = 0; i < values.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.12g", values[i]);
            out_ << (i ? "," : "") << buf;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::string format_g12(double value);

} // namespace pcqad
