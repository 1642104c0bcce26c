#pragma once

#include "eqboot/core.hpp"
#include "eqboot/experiments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace eqboot {

struct PgmScale {
    double min = 0.0;
    double max = 0.0;
};

/// 16-bit big-endian binary PGM (P5, maxval 65535), min-max scaled. Returns
/// the scale so the caller can record it in a sidecar. A constant image maps
/// to all zeros.
PgmScale write_pgm16(const std::string& path, const Signal& image);

struct Pgm16 {
    Shape shape{};
    std::vector<std::uint16_t> pixels;
};

Pgm16 read_pgm16(const std::string& path);

/// Canonical CSV: header `method,level,empirical,n_trials`, one row per
/// (method, level). Formatting is fixed so reruns are byte-identical.
void write_coverage_csv(const std::string& path, const std::vector<CoverageCurve>& curves);

/// Single-column CSV of bootstrap squared errors, header `error`.
void write_errors_csv(const std::string& path, const std::vector<double>& errors);

/// Self-contained SVG coverage plot: axes, the diagonal reference line, one
/// polyline per curve, and a legend.
void write_coverage_svg(const std::string& path, const std::vector<CoverageCurve>& curves);

/// Fixed shortest-round-trip-ish formatting used in all text outputs.
std::string fmt_double(double v);

}  // namespace eqboot
