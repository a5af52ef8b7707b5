#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hippo/harness.hpp"

namespace hippo {

inline constexpr std::string_view kCsvHeader = "seed,step,evaluations,hv_regret,step_wall_time_s";

/// Shortest round-trip decimal representation, '.' separator, '\n' newlines.
std::string format_csv(std::span<const StepRecord> records);
std::vector<StepRecord> parse_csv(std::string_view text);

void write_csv(std::span<const StepRecord> records, const std::filesystem::path& path);
std::vector<StepRecord> read_csv(const std::filesystem::path& path);

/// Linear-interpolation percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

/// Across-seed statistics of regret at each evaluation count.
struct RegretBand {
    std::vector<double> evaluations;
    std::vector<double> mean;
    std::vector<double> p25;
    std::vector<double> p75;
    std::size_t seeds = 0;
};

/// Seeds on differing evaluation grids are resampled (last value at or
/// before each point) onto the coarsest seed's grid, with a warning.
RegretBand summarise_regret(std::span<const StepRecord> records);

using LabelledBand = std::pair<std::string, RegretBand>;

std::string render_regret_svg(std::span<const LabelledBand> series, std::string_view title = "HV regret");
void write_regret_svg(std::span<const LabelledBand> series, const std::filesystem::path& path,
                      std::string_view title = "HV regret");

/// Reads every *.csv in `dir` (sorted by name) and labels each by its stem.
std::vector<LabelledBand> load_regret_bands(const std::filesystem::path& dir);

}  // namespace hippo
