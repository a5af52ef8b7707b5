#include "hippo/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "hippo/log.hpp"

namespace hippo {

namespace {

template <typename T>
void append_number(std::string& out, T value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    out.append(buf.data(), ptr);
}

template <typename T>
T parse_field(std::string_view s, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw Error("CSV line " + std::to_string(line) + ": malformed field '" + std::string(s) + "'");
    return value;
}

std::string svg_number(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Value of a seed's step trajectory at evaluation count x: last record at or before x.
double value_at(const std::vector<const StepRecord*>& trajectory, double x) {
    double v = trajectory.front()->hv_regret;
    for (const auto* r : trajectory) {
        if (static_cast<double>(r->evaluations) > x)
            break;
        v = r->hv_regret;
    }
    return v;
}

}  // namespace

std::string format_csv(std::span<const StepRecord> records) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        append_number(out, r.seed);
        out += ',';
        append_number(out, r.step);
        out += ',';
        append_number(out, r.evaluations);
        out += ',';
        append_number(out, r.hv_regret);
        out += ',';
        append_number(out, r.step_wall_time);
        out += '\n';
    }
    return out;
}

std::vector<StepRecord> parse_csv(std::string_view text) {
    std::vector<StepRecord> records;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!header_seen) {
            if (line != kCsvHeader)
                throw Error("CSV header mismatch: '" + std::string(line) + "'");
            header_seen = true;
            continue;
        }
        if (line.empty())
            continue;
        std::array<std::string_view, 5> fields;
        std::size_t count = 0;
        while (true) {
            const auto comma = line.find(',');
            if (count == fields.size())
                throw Error("CSV line " + std::to_string(line_no) + ": too many fields");
            fields[count++] = line.substr(0, comma);
            if (comma == std::string_view::npos)
                break;
            line.remove_prefix(comma + 1);
        }
        if (count != fields.size())
            throw Error("CSV line " + std::to_string(line_no) + ": expected 5 fields");
        StepRecord r;
        r.seed = parse_field<std::uint64_t>(fields[0], line_no);
        r.step = parse_field<std::size_t>(fields[1], line_no);
        r.evaluations = parse_field<std::size_t>(fields[2], line_no);
        r.hv_regret = parse_field<double>(fields[3], line_no);
        r.step_wall_time = parse_field<double>(fields[4], line_no);
        records.push_back(r);
    }
    if (!header_seen)
        throw Error("CSV is empty");
    return records;
}

void write_csv(std::span<const StepRecord> records, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    const std::string text = format_csv(records);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error("failed writing " + path.string());
}

std::vector<StepRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

double percentile(std::vector<double> values, double q) {
    if (values.empty())
        throw Error("percentile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw Error("percentile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

RegretBand summarise_regret(std::span<const StepRecord> records) {
    std::map<std::uint64_t, std::vector<const StepRecord*>> by_seed;
    for (const auto& r : records)
        by_seed[r.seed].push_back(&r);
    RegretBand band;
    if (by_seed.empty())
        return band;
    for (auto& [_, trajectory] : by_seed)
        std::stable_sort(trajectory.begin(), trajectory.end(),
                         [](const auto* a, const auto* b) { return a->evaluations < b->evaluations; });

    auto grid_of = [](const std::vector<const StepRecord*>& t) {
        std::vector<double> g;
        for (const auto* r : t)
            g.push_back(static_cast<double>(r->evaluations));
        return g;
    };
    std::vector<double> grid = grid_of(by_seed.begin()->second);
    bool mismatch = false;
    double common_end = grid.back();
    for (const auto& [_, trajectory] : by_seed) {
        const auto g = grid_of(trajectory);
        if (g != grid)
            mismatch = true;
        common_end = std::min(common_end, g.back());
        if (g.size() < grid.size())
            grid = g;
    }
    if (mismatch) {
        log::warn("seeds use different evaluation grids; resampling onto the coarsest common grid");
        std::erase_if(grid, [&](double x) { return x > common_end; });
    }

    band.seeds = by_seed.size();
    for (double x : grid) {
        std::vector<double> values;
        for (const auto& [_, trajectory] : by_seed)
            values.push_back(value_at(trajectory, x));
        double sum = 0.0;
        for (double v : values)
            sum += v;
        band.evaluations.push_back(x);
        band.mean.push_back(sum / static_cast<double>(values.size()));
        band.p25.push_back(percentile(values, 0.25));
        band.p75.push_back(percentile(values, 0.75));
    }
    return band;
}

std::string render_regret_svg(std::span<const LabelledBand> series, std::string_view title) {
    constexpr double width = 800, height = 500;
    constexpr double left = 80, right = 200, top = 50, bottom = 60;
    constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
    static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const auto& [_, band] : series) {
        for (std::size_t i = 0; i < band.evaluations.size(); ++i) {
            const double lo = std::min(band.p25[i], band.mean[i]);
            const double hi = std::max(band.p75[i], band.mean[i]);
            if (first) {
                x_min = x_max = band.evaluations[i];
                y_min = lo;
                y_max = hi;
                first = false;
            }
            x_min = std::min(x_min, band.evaluations[i]);
            x_max = std::max(x_max, band.evaluations[i]);
            y_min = std::min(y_min, lo);
            y_max = std::max(y_max, hi);
        }
    }
    y_min = std::min(y_min, 0.0);
    if (x_max <= x_min)
        x_max = x_min + 1;
    if (y_max <= y_min)
        y_max = y_min + 1;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

    std::ostringstream svg;
    svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << width << R"(" height=")" << height
        << R"(" font-family="sans-serif" font-size="12">)" << '\n';
    svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    svg << R"(<text x=")" << left + plot_w / 2 << R"(" y="30" text-anchor="middle" font-size="16">)"
        << escape_xml(title) << "</text>\n";

    // axes and ticks
    svg << R"(<g stroke="black" fill="none">)" << '\n';
    svg << R"(<line x1=")" << left << R"(" y1=")" << top + plot_h << R"(" x2=")" << left + plot_w << R"(" y2=")"
        << top + plot_h << R"("/>)" << '\n';
    svg << R"(<line x1=")" << left << R"(" y1=")" << top << R"(" x2=")" << left << R"(" y2=")" << top + plot_h
        << R"("/>)" << '\n';
    svg << "</g>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        svg << R"(<text x=")" << svg_number(px(xv)) << R"(" y=")" << top + plot_h + 18
            << R"(" text-anchor="middle">)" << tick_label(xv) << "</text>\n";
        svg << R"(<text x=")" << left - 8 << R"(" y=")" << svg_number(py(yv) + 4) << R"(" text-anchor="end">)"
            << tick_label(yv) << "</text>\n";
    }
    svg << R"(<text x=")" << left + plot_w / 2 << R"(" y=")" << height - 15
        << R"(" text-anchor="middle">evaluations</text>)" << '\n';
    svg << R"(<text x="20" y=")" << top + plot_h / 2 << R"(" text-anchor="middle" transform="rotate(-90 20 )"
        << top + plot_h / 2 << R"x()">HV regret</text>)x" << '\n';

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& [label, band] = series[s];
        const char* colour = palette[s % palette.size()];
        if (band.evaluations.empty())
            continue;
        svg << R"(<g class="series" data-label=")" << escape_xml(label) << R"(">)" << '\n';
        svg << R"(<polygon fill=")" << colour << R"(" fill-opacity="0.2" stroke="none" points=")";
        for (std::size_t i = 0; i < band.evaluations.size(); ++i)
            svg << svg_number(px(band.evaluations[i])) << ',' << svg_number(py(band.p75[i])) << ' ';
        for (std::size_t i = band.evaluations.size(); i-- > 0;)
            svg << svg_number(px(band.evaluations[i])) << ',' << svg_number(py(band.p25[i])) << ' ';
        svg << R"("/>)" << '\n';
        svg << R"(<polyline fill="none" stroke=")" << colour << R"(" stroke-width="2" points=")";
        for (std::size_t i = 0; i < band.evaluations.size(); ++i)
            svg << svg_number(px(band.evaluations[i])) << ',' << svg_number(py(band.mean[i])) << ' ';
        svg << R"("/>)" << '\n';
        const double ly = top + 20 + 20.0 * static_cast<double>(s);
        svg << R"(<line x1=")" << left + plot_w + 15 << R"(" y1=")" << ly << R"(" x2=")" << left + plot_w + 40
            << R"(" y2=")" << ly << R"(" stroke=")" << colour << R"(" stroke-width="2"/>)" << '\n';
        svg << R"(<text x=")" << left + plot_w + 45 << R"(" y=")" << ly + 4 << R"(">)" << escape_xml(label)
            << "</text>\n";
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_regret_svg(std::span<const LabelledBand> series, const std::filesystem::path& path,
                      std::string_view title) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << render_regret_svg(series, title);
    if (!out)
        throw Error("failed writing " + path.string());
}

std::vector<LabelledBand> load_regret_bands(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw Error(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<LabelledBand> bands;
    for (const auto& f : files) {
        const auto records = read_csv(f);
        if (records.empty()) {
            log::warn(f.string() + " has no records; skipped");
            continue;
        }
        bands.emplace_back(f.stem().string(), summarise_regret(records));
    }
    return bands;
}

}  // namespace hippo
