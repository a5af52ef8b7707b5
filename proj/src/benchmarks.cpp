#include "hippo/benchmarks.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hippo {

namespace {

constexpr std::array<double, 4> kHartmannAlpha{1.0, 1.2, 3.0, 3.2};
constexpr std::array<std::array<double, 6>, 4> kHartmannA{{
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
}};
constexpr std::array<std::array<double, 6>, 4> kHartmannP{{
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
}};

void require_dim(const DesignPoint& x, Eigen::Index n, const char* name) {
    if (x.size() != n)
        throw Error(std::string(name) + ": expected " + std::to_string(n) + " inputs, got " + std::to_string(x.size()));
}

std::string header_for(std::size_t k) {
    std::string h;
    for (std::size_t i = 0; i < k; ++i)
        h += (i ? ",f" : "f") + std::to_string(i + 1);
    return h;
}

double parse_double(std::string_view s, const std::filesystem::path& path) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    while (first != last && *first == ' ')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw Error("malformed number '" + std::string(s) + "' in " + path.string());
    return v;
}

}  // namespace

ObjectiveVector vlmop2(const DesignPoint& x) {
    if (x.size() < 1)
        throw Error("vlmop2: needs at least one input");
    const double shift = 1.0 / std::sqrt(static_cast<double>(x.size()));
    const double a = (x.array() - shift).square().sum();
    const double b = (x.array() + shift).square().sum();
    return {-std::expm1(-a), -std::expm1(-b)};
}

ObjectiveVector dtlz2(const DesignPoint& x, std::size_t objectives) {
    const auto n = static_cast<std::size_t>(x.size());
    if (objectives < 2 || n < objectives)
        throw Error("dtlz2: need n >= k >= 2");
    double g = 0.0;
    for (std::size_t i = objectives - 1; i < n; ++i)
        g += (x[i] - 0.5) * (x[i] - 0.5);
    const double half_pi = std::numbers::pi / 2.0;
    std::vector<double> f(objectives, 1.0 + g);
    for (std::size_t m = 0; m < objectives; ++m) {
        const std::size_t cos_terms = objectives - 1 - m;
        for (std::size_t j = 0; j < cos_terms; ++j)
            f[m] *= std::cos(x[j] * half_pi);
        if (m > 0)
            f[m] *= std::sin(x[cos_terms] * half_pi);
    }
    return ObjectiveVector(std::move(f));
}

double hartmann6(const DesignPoint& x) {
    require_dim(x, 6, "hartmann6");
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            const double d = x[static_cast<Eigen::Index>(j)] - kHartmannP[i][j];
            inner += kHartmannA[i][j] * d * d;
        }
        total += kHartmannAlpha[i] * std::exp(-inner);
    }
    return -total;
}

double ackley(const DesignPoint& z) {
    if (z.size() < 1)
        throw Error("ackley: needs at least one input");
    const double n = static_cast<double>(z.size());
    const double rms = std::sqrt(z.squaredNorm() / n);
    const double cos_mean = (2.0 * std::numbers::pi * z.array()).cos().sum() / n;
    return -20.0 * std::exp(-0.2 * rms) - std::exp(cos_mean) + 20.0 + std::numbers::e;
}

ObjectiveVector hartmann_ackley(const DesignPoint& x) {
    require_dim(x, 6, "hartmann_ackley");
    const DesignPoint z = (4.0 * x.array() - 2.0).matrix();
    // Ackley is exactly zero at the origin only up to rounding.
    return {hartmann6(x), std::max(ackley(z), 0.0)};
}

ParetoFront vlmop2_front(std::size_t samples) {
    // Pareto set: x1 = x2 = t, |t| <= 1/sqrt(2).
    const double edge = 1.0 / std::numbers::sqrt2;
    std::vector<ObjectiveVector> points;
    points.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = -edge + 2.0 * edge * static_cast<double>(i) / static_cast<double>(samples - 1);
        points.push_back(vlmop2(Eigen::Vector2d(t, t)));
    }
    return extract_front(points);
}

ParetoFront dtlz2_front(std::size_t samples) {
    std::vector<ObjectiveVector> points;
    points.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double theta = std::numbers::pi / 2.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
        points.push_back({std::cos(theta), std::sin(theta)});
    }
    return extract_front(points);
}

ObjectiveVector reference_from_front(const ParetoFront& front, double inflation) {
    if (front.empty())
        throw Error("cannot derive a reference point from an empty front");
    const std::size_t k = front.objective_count();
    std::vector<double> ref(k);
    for (std::size_t i = 0; i < k; ++i) {
        double lo = front.members().front()[i], hi = lo;
        for (const auto& y : front) {
            lo = std::min(lo, y[i]);
            hi = std::max(hi, y[i]);
        }
        const double extent = hi - lo;
        ref[i] = hi + inflation * (extent > 0.0 ? extent : std::max(std::abs(hi), 1.0));
    }
    return ObjectiveVector(std::move(ref));
}

BenchmarkProblem make_vlmop2() {
    BenchmarkProblem p;
    p.name = "vlmop2";
    p.input_dim = 2;
    p.objective_count = 2;
    p.bounds.add_continuous(-2.0, 2.0).add_continuous(-2.0, 2.0);
    p.evaluate = [](const DesignPoint& x) {
        require_dim(x, 2, "vlmop2");
        return vlmop2(x);
    };
    p.true_front = vlmop2_front();
    p.ref_point = reference_from_front(p.true_front);
    return p;
}

BenchmarkProblem make_dtlz2(std::size_t input_dim) {
    BenchmarkProblem p;
    p.name = "dtlz2";
    p.input_dim = input_dim;
    p.objective_count = 2;
    p.bounds = SearchSpace::unit_box(input_dim);
    p.evaluate = [input_dim](const DesignPoint& x) {
        require_dim(x, static_cast<Eigen::Index>(input_dim), "dtlz2");
        return dtlz2(x, 2);
    };
    p.true_front = dtlz2_front();
    p.ref_point = reference_from_front(p.true_front);
    return p;
}

BenchmarkProblem make_hartmann_ackley(const ParetoFront& true_front) {
    BenchmarkProblem p;
    p.name = "hartmann_ackley";
    p.input_dim = 6;
    p.objective_count = 2;
    p.bounds = SearchSpace::unit_box(6);
    p.evaluate = [](const DesignPoint& x) { return hartmann_ackley(x); };
    p.true_front = true_front;
    p.ref_point = reference_from_front(p.true_front);
    return p;
}

BenchmarkProblem make_hartmann_ackley() {
    return make_hartmann_ackley(read_front_csv(data_directory() / "hartmann_ackley_front.csv"));
}

BenchmarkProblem make_problem(std::string_view name) {
    if (name == "vlmop2")
        return make_vlmop2();
    if (name == "dtlz2")
        return make_dtlz2();
    if (name == "hartmann_ackley")
        return make_hartmann_ackley();
    throw Error("unknown problem '" + std::string(name) + "'");
}

std::vector<std::string> problem_names() {
    return {"vlmop2", "dtlz2", "hartmann_ackley"};
}

std::filesystem::path data_directory() {
    if (const char* env = std::getenv("HIPPO_DATA_DIR"); env && *env)
        return env;
#ifdef HIPPO_DATA_DIR
    return HIPPO_DATA_DIR;
#else
    return "data";
#endif
}

ParetoFront read_front_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open front file " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw Error("front file " + path.string() + " is empty");
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',') + 1);
    if (line != header_for(columns))
        throw Error("front file " + path.string() + " has unexpected header '" + line + "'");

    std::vector<ObjectiveVector> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> values;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_double(rest.substr(0, comma), path));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (values.size() != columns)
            throw Error("front file " + path.string() + " has a row with the wrong column count");
        rows.emplace_back(std::move(values));
    }
    return extract_front(rows);
}

void write_front_csv(const ParetoFront& front, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write front file " + path.string());
    out << header_for(std::max<std::size_t>(front.objective_count(), 2)) << '\n';
    for (const auto& y : front) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, y[i]);
            if (i)
                out << ',';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
    if (!out)
        throw Error("failed writing front file " + path.string());
}

}  // namespace hippo
