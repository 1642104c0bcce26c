#include "eqboot/image_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eqboot {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    return out;
}

}  // namespace

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

PgmScale write_pgm16(const std::string& path, const Signal& image) {
    const Eigen::VectorXd& v = image.data();
    PgmScale scale{v.minCoeff(), v.maxCoeff()};
    const double span = scale.max - scale.min;
    auto out = open_out(path, std::ios::binary);
    out << "P5\n" << image.shape().width << " " << image.shape().height << "\n65535\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::uint16_t q = 0;
        if (span > 0.0) {
            const double t = (v[i] - scale.min) / span;
            q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        }
        const unsigned char hi = static_cast<unsigned char>(q >> 8);
        const unsigned char lo = static_cast<unsigned char>(q & 0xFF);
        out.put(static_cast<char>(hi));
        out.put(static_cast<char>(lo));
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
    return scale;
}

Pgm16 read_pgm16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    std::string magic;
    in >> magic;
    if (magic != "P5") {
        throw std::runtime_error("not a binary PGM: " + path);
    }
    int w = 0, h = 0, maxval = 0;
    in >> w >> h >> maxval;
    if (maxval != 65535 || w <= 0 || h <= 0) {
        throw std::runtime_error("unsupported PGM header: " + path);
    }
    in.get();  // single whitespace after maxval
    Pgm16 img;
    img.shape = Shape{h, w};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (auto& p : img.pixels) {
        const int hi = in.get();
        const int lo = in.get();
        if (hi < 0 || lo < 0) {
            throw std::runtime_error("truncated PGM: " + path);
        }
        p = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return img;
}

void write_coverage_csv(const std::string& path, const std::vector<CoverageCurve>& curves) {
    auto out = open_out(path);
    out << "method,level,empirical,n_trials\n";
    for (const CoverageCurve& curve : curves) {
        for (std::size_t i = 0; i < curve.levels.size(); ++i) {
            out << curve.method_tag << ',' << fmt_double(curve.levels[i]) << ','
                << fmt_double(curve.empirical[i]) << ',' << curve.n_trials << '\n';
        }
    }
}

void write_errors_csv(const std::string& path, const std::vector<double>& errors) {
    auto out = open_out(path);
    out << "error\n";
    for (double e : errors) {
        out << fmt_double(e) << '\n';
    }
}

void write_coverage_svg(const std::string& path, const std::vector<CoverageCurve>& curves) {
    static const char* kPalette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad",
                                     "#d35400", "#16a085"};
    const int width = 640, height = 520, margin = 60;
    const int plot_w = width - 2 * margin;
    const int plot_h = height - 2 * margin;
    const auto sx = [&](double level) { return margin + level * plot_w; };
    const auto sy = [&](double cov) { return height - margin - cov * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(0) << "\" y2=\""
        << sy(1) << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 10; tick += 2) {
        const double t = tick / 10.0;
        svg << "<text x=\"" << sx(t) - 8 << "\" y=\"" << sy(0) + 20
            << "\" font-size=\"12\">" << fmt_double(t) << "</text>\n";
        svg << "<text x=\"" << sx(0) - 35 << "\" y=\"" << sy(t) + 4
            << "\" font-size=\"12\">" << fmt_double(t) << "</text>\n";
    }
    svg << "<text x=\"" << width / 2 - 60 << "\" y=\"" << height - 15
        << "\" font-size=\"13\">confidence level</text>\n";
    svg << "<text x=\"15\" y=\"" << height / 2
        << "\" font-size=\"13\" transform=\"rotate(-90 15 " << height / 2
        << ")\">empirical coverage</text>\n";
    // diagonal reference
    svg << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\""
        << sy(1) << "\" stroke=\"gray\" stroke-dasharray=\"5,5\"/>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const char* color = kPalette[c % 6];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < curves[c].levels.size(); ++i) {
            svg << fmt_double(sx(curves[c].levels[i])) << ','
                << fmt_double(sy(curves[c].empirical[i])) << ' ';
        }
        svg << "\"/>\n";
        const double ly = margin + 18.0 * static_cast<double>(c);
        svg << "<line x1=\"" << margin + 10 << "\" y1=\"" << ly << "\" x2=\"" << margin + 40
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << margin + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << curves[c].method_tag << "</text>\n";
    }
    svg << "</svg>\n";

    auto out = open_out(path);
    out << svg.str();
}

}  // namespace eqboot
