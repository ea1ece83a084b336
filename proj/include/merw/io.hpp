#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "merw/common.hpp"

namespace merw {

// Locale-independent decimal rendering with 17 significant digits, the
// precision every CSV emitter uses so that runs are byte-reproducible.
std::string format_double(double value, int significant_digits = 17);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    CsvWriter& cell(const std::string& text);
    CsvWriter& cell(double value);
    CsvWriter& cell(std::size_t value);
    void end_row();

private:
    std::ostream& out_;
    bool row_started_ = false;
};

void write_csv_file(const std::string& path, const std::string& header,
                    const std::vector<std::vector<std::string>>& rows);

// ---------------------------------------------------------------------------
// PGM (P2, 16-bit, row-major) for 2D field heatmaps.
// ---------------------------------------------------------------------------

void write_pgm(std::ostream& out, const Vec& field, std::size_t width, std::size_t height);
void write_pgm_file(const std::string& path, const Vec& field, std::size_t width, std::size_t height);

// ---------------------------------------------------------------------------
// Minimal SVG line plot (one or more series over a shared x grid).
// ---------------------------------------------------------------------------

struct SvgSeries {
    std::string label;
    Vec y;
};

struct SvgPlotOptions {
    std::size_t width = 800;
    std::size_t height = 400;
    bool log_y = false;
    std::string title;
};

void write_svg_plot(std::ostream& out, const Vec& x, const std::vector<SvgSeries>& series,
                    const SvgPlotOptions& options);
void write_svg_plot_file(const std::string& path, const Vec& x,
                         const std::vector<SvgSeries>& series, const SvgPlotOptions& options);

// ---------------------------------------------------------------------------
// SHA-256 content digests for run manifests.
// ---------------------------------------------------------------------------

class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    std::array<std::uint8_t, 32> finish();

    static std::string hex_digest(const std::string& data);
    static std::string hex_digest_file(const std::string& path);

private:
    void process_block(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::size_t buffered_ = 0;
    std::uint64_t total_ = 0;
};

}  // namespace merw
