#pragma once

#include "negeo/estimation.hpp"

#include <string>
#include <string_view>

namespace negeo::report {

enum class Format {
    Table,   // human-readable row set, three decimals, t-statistics in brackets
    Records, // key=value lines at full precision
};

Format parse_format(std::string_view name);

std::string write_fit_report(const estimation::FitResult& fit, Format format);

/// Inverse of write_fit_report(fit, Format::Records). Throws ValidationError
/// on unknown keys, missing keys or malformed values.
estimation::FitResult parse_fit_records(std::string_view text);

/// Field-wise equality treating NaN == NaN.
bool same_fit(const estimation::FitResult& a, const estimation::FitResult& b);

}  // namespace negeo::report
