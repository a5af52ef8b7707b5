// Brute-force approximation of the Hartmann-6 / Ackley Pareto front:
// a dense Sobol scan, Chebyshev-scalarised pattern searches over a weight
// grid, then polishing passes started from every front member's preimage.
// Every evaluated point is offered to a non-dominated archive.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <vector>

#include "hippo/benchmarks.hpp"
#include "hippo/optimiser.hpp"
#include "hippo/qmc.hpp"

namespace {

constexpr double kIdeal1 = -3.33;
constexpr double kIdeal2 = -0.01;

class Archive {
public:
    void offer(const hippo::DesignPoint& x, const hippo::ObjectiveVector& y) {
        pending_.emplace(y, x);
        if (pending_.size() >= 100'000)
            flush();
    }

    // Returns the current front with the preimage of every member.
    const std::map<hippo::ObjectiveVector, hippo::DesignPoint>& flush() {
        pending_.insert(front_.begin(), front_.end());
        std::vector<hippo::ObjectiveVector> ys;
        ys.reserve(pending_.size());
        for (const auto& [y, _] : pending_)
            ys.push_back(y);
        std::map<hippo::ObjectiveVector, hippo::DesignPoint> next;
        for (const auto& y : hippo::extract_front(ys))
            next.emplace(y, pending_.at(y));
        front_ = std::move(next);
        pending_.clear();
        return front_;
    }

private:
    std::map<hippo::ObjectiveVector, hippo::DesignPoint> pending_;
    std::map<hippo::ObjectiveVector, hippo::DesignPoint> front_;
};

double chebyshev(const hippo::ObjectiveVector& y, double lambda, double s1, double s2) {
    return std::max(lambda * (y[0] - kIdeal1) / s1, (1.0 - lambda) * (y[1] - kIdeal2) / s2);
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path out =
        argc > 1 ? std::filesystem::path(argv[1]) : hippo::data_directory() / "hartmann_ackley_front.csv";
    const std::size_t scalarisations = argc > 2 ? std::stoul(argv[2]) : 600;
    const std::size_t polish_passes = argc > 3 ? std::stoul(argv[3]) : 3;

    Archive archive;
    const auto scan = hippo::sobol_points(1 << 20, 6, 2023);
    for (Eigen::Index i = 0; i < scan.rows(); ++i) {
        const hippo::DesignPoint x = scan.row(i).transpose();
        archive.offer(x, hippo::hartmann_ackley(x));
    }
    const std::size_t coarse_size = archive.flush().size();

    // Normalisation from the Hartmann minimum and the Ackley value there.
    const double s1 = 3.0, s2 = 5.0;
    const hippo::SearchSpace box = hippo::SearchSpace::unit_box(6);

    auto search = [&](double lambda, std::uint64_t seed, const hippo::DesignPoint* start) {
        auto objective = [&](const hippo::DesignPoint& x) {
            const auto y = hippo::hartmann_ackley(x);
            archive.offer(x, y);
            return -chebyshev(y, lambda, s1, s2);
        };
        hippo::MaximiseOptions opts;
        opts.min_step = 1e-8;
        opts.seed = seed;
        if (start) {
            hippo::SearchSpace near;
            for (Eigen::Index d = 0; d < 6; ++d)
                near.add_continuous(std::max(0.0, (*start)[d] - 0.05), std::min(1.0, (*start)[d] + 0.05));
            opts.budget = 64;
            opts.restarts = 2;
            opts.refine_evaluations = 3000;
            hippo::maximise(objective, near, opts);
        } else {
            opts.budget = 4000;
            opts.restarts = 8;
            opts.refine_evaluations = 4000;
            hippo::maximise(objective, box, opts);
        }
    };

    for (std::size_t i = 0; i < scalarisations; ++i)
        search((static_cast<double>(i) + 0.5) / static_cast<double>(scalarisations), hippo::mix_seed(7, i), nullptr);

    for (std::size_t pass = 0; pass < polish_passes; ++pass) {
        const auto front = archive.flush();
        std::size_t j = 0;
        for (const auto& [y, x] : front) {
            // Weight under which this member sits on the balanced ray.
            const double a = (y[0] - kIdeal1) / s1, b = (y[1] - kIdeal2) / s2;
            const double lambda = b / (a + b);
            search(lambda, hippo::mix_seed(1000 + pass, j++), &x);
        }
        std::cout << "pass " << pass << ": " << front.size() << " members\n";
    }

    std::vector<hippo::ObjectiveVector> ys;
    for (const auto& [y, _] : archive.flush())
        ys.push_back(y);
    const auto front = hippo::extract_front(ys);
    hippo::write_front_csv(front, out);
    std::cout << "coarse scan front: " << coarse_size << " points; final front: " << front.size() << " points -> "
              << out.string() << '\n';
    return 0;
}
