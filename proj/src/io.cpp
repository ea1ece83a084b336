#include "merw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace merw {

std::string format_double(double value, int significant_digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                             significant_digits);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

CsvWriter& CsvWriter::cell(const std::string& text) {
    if (row_started_) out_ << ",";
    out_ << text;
    row_started_ = true;
    return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }

CsvWriter& CsvWriter::cell(std::size_t value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
    out_ << "\n";
    row_started_ = false;
}

void write_csv_file(const std::string& path, const std::string& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

void write_pgm(std::ostream& out, const Vec& field, std::size_t width, std::size_t height) {
    if (field.size() != width * height) throw InvalidArgument("pgm: field size mismatch");
    double lo = field.empty() ? 0.0 : field[0];
    double hi = lo;
    for (double v : field) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    out << "P2\n" << width << " " << height << "\n65535\n";
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double v = (field[y * width + x] - lo) / span;
            const long pixel = std::lround(v * 65535.0);
            out << pixel;
            out << (x + 1 == width ? '\n' : ' ');
        }
    }
}

void write_pgm_file(const std::string& path, const Vec& field, std::size_t width,
                    std::size_t height) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write_pgm(out, field, width, height);
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace {

double plot_transform(double v, bool log_scale) {
    if (!log_scale) return v;
    return std::log10(std::max(v, 1e-300));
}

}  // namespace

void write_svg_plot(std::ostream& out, const Vec& x, const std::vector<SvgSeries>& series,
                    const SvgPlotOptions& options) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    const double w = static_cast<double>(options.width);
    const double h = static_cast<double>(options.height);
    const double margin = 48.0;

    double xmin = x.empty() ? 0.0 : x.front(), xmax = x.empty() ? 1.0 : x.front();
    for (double v : x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    double ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (double v : s.y) {
            const double t = plot_transform(v, options.log_y);
            if (first) {
                ymin = ymax = t;
                first = false;
            } else {
                ymin = std::min(ymin, t);
                ymax = std::max(ymax, t);
            }
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    auto px = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * (w - 2 * margin); };
    auto py = [&](double v) {
        const double t = plot_transform(v, options.log_y);
        return h - margin - (t - ymin) / (ymax - ymin) * (h - 2 * margin);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        out << "<text x=\"" << format_double(w / 2, 6) << "\" y=\"20\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"14\">"
            << options.title << "</text>\n";
    out << "<line x1=\"" << format_double(margin, 6) << "\" y1=\"" << format_double(h - margin, 6)
        << "\" x2=\"" << format_double(w - margin, 6) << "\" y2=\"" << format_double(h - margin, 6)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << format_double(margin, 6) << "\" y1=\"" << format_double(margin, 6)
        << "\" x2=\"" << format_double(margin, 6) << "\" y2=\"" << format_double(h - margin, 6)
        << "\" stroke=\"black\"/>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << kColors[s % 5] << "\" points=\"";
        for (std::size_t i = 0; i < series[s].y.size() && i < x.size(); ++i) {
            out << format_double(px(x[i]), 8) << "," << format_double(py(series[s].y[i]), 8);
            if (i + 1 < series[s].y.size() && i + 1 < x.size()) out << " ";
        }
        out << "\"/>\n";
        if (!series[s].label.empty())
            out << "<text x=\"" << format_double(w - margin + 4, 6) << "\" y=\""
                << format_double(margin + 16.0 * static_cast<double>(s), 6)
                << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[s % 5]
                << "\">" << series[s].label << "</text>\n";
    }
    out << "</svg>\n";
}

void write_svg_plot_file(const std::string& path, const Vec& x,
                         const std::vector<SvgSeries>& series, const SvgPlotOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write_svg_plot(out, x, series, options);
}

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4)
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kSha256K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

}  // namespace

Sha256::Sha256()
    : state_{0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
             0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19} {}

void Sha256::process_block(const std::uint8_t* block) {
    std::uint32_t w[64];
    for (int i = 0; i < 16; ++i)
        w[i] = (std::uint32_t(block[4 * i]) << 24) | (std::uint32_t(block[4 * i + 1]) << 16) |
               (std::uint32_t(block[4 * i + 2]) << 8) | std::uint32_t(block[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
        const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    std::uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
        const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        const std::uint32_t ch = (e & f) ^ (~e & g);
        const std::uint32_t t1 = h + s1 + ch + kSha256K[i] + w[i];
        const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        const std::uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
}

void Sha256::update(const void* data, std::size_t len) {
    const std::uint8_t* bytes = static_cast<const std::uint8_t*>(data);
    total_ += len;
    while (len > 0) {
        const std::size_t take = std::min(len, buffer_.size() - buffered_);
        std::memcpy(buffer_.data() + buffered_, bytes, take);
        buffered_ += take;
        bytes += take;
        len -= take;
        if (buffered_ == buffer_.size()) {
            process_block(buffer_.data());
            buffered_ = 0;
        }
    }
}

std::array<std::uint8_t, 32> Sha256::finish() {
    const std::uint64_t bit_len = total_ * 8;
    const std::uint8_t pad = 0x80;
    update(&pad, 1);
    const std::uint8_t zero = 0x00;
    while (buffered_ != 56) update(&zero, 1);
    std::uint8_t len_bytes[8];
    for (int i = 0; i < 8; ++i) len_bytes[i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
    update(len_bytes, 8);
    std::array<std::uint8_t, 32> digest;
    for (int i = 0; i < 8; ++i) {
        digest[4 * i] = static_cast<std::uint8_t>(state_[i] >> 24);
        digest[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 16);
        digest[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 8);
        digest[4 * i + 3] = static_cast<std::uint8_t>(state_[i]);
    }
    return digest;
}

namespace {

std::string to_hex(const std::array<std::uint8_t, 32>& digest) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xf]);
    }
    return out;
}

}  // namespace

std::string Sha256::hex_digest(const std::string& data) {
    Sha256 h;
    h.update(data.data(), data.size());
    return to_hex(h.finish());
}

std::string Sha256::hex_digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    Sha256 h;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    return to_hex(h.finish());
}

}  // namespace merw
