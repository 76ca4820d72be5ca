#include "penlevel/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "penlevel/errors.hpp"
#include "penlevel/normal.hpp"
#include "penlevel/rng.hpp"

namespace penlevel {

std::string method_name(Method method) {
    switch (method) {
        case Method::Mdt: return "mdt";
        case Method::SteinMc: return "stein_mc";
        case Method::Cv: return "cv";
    }
    throw DomainError("unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "mdt") return Method::Mdt;
    if (name == "stein_mc" || name == "stein") return Method::SteinMc;
    if (name == "cv") return Method::Cv;
    throw DomainError("unknown method '" + name + "'");
}

std::string PenaltyEstimate::to_json() const {
    nlohmann::ordered_json j;
    j["lambda"] = lambda;
    j["method"] = method_name(method);
    j["quantile"] = quantile;
    j["draws"] = draws;
    j["seed"] = seed;
    return j.dump();
}

PenaltyEstimate lambda_mdt(const ProblemSpec& spec, Eigen::Index n, Eigen::Index p) {
    if (n < 1 || p < 1) throw DomainError("lambda_mdt needs n >= 1 and p >= 1");
    const double tail = spec.alpha / (2.0 * static_cast<double>(p));
    if (tail >= 1.0) throw DomainError("alpha/(2p) must be below 1");
    const double q = phi_inv(1.0 - tail);
    PenaltyEstimate est;
    est.lambda = spec.c * spec.theta * q / std::sqrt(static_cast<double>(n));
    est.method = Method::Mdt;
    est.quantile = q;
    return est;
}

namespace {

// T_b for one multiplier draw; counters start at b*n so every draw owns a
// fixed slice of the stream regardless of evaluation order.
double stein_draw_max(const ProblemSpec& spec, const Dataset& dataset, std::uint64_t seed,
                      int draw_index) {
    const Eigen::Index n = dataset.n();
    CounterRng rng(seed, static_cast<std::uint64_t>(draw_index) * static_cast<std::uint64_t>(n));
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i) e(i) = rng.next_normal();

    double scale = 1.0;
    switch (spec.family) {
        case Family::Lasso: scale = spec.theta; break;
        case Family::SqrtLasso:
            scale = 1.0 / std::sqrt(e.squaredNorm() / static_cast<double>(n));
            break;
        case Family::PoissonWsf: scale = 1.0; break;
    }
    const double sup = (dataset.X().transpose() * e).cwiseAbs().maxCoeff();
    return sup * scale / std::sqrt(static_cast<double>(n));
}

}  // namespace

PenaltyEstimate lambda_stein(const ProblemSpec& spec, const Dataset& dataset, int draws,
                             std::uint64_t seed, int threads) {
    if (draws < 100) throw InsufficientDrawsError(draws);
    if (!dataset.standardized()) throw NotStandardizedError();

    std::vector<double> sup_stats(static_cast<std::size_t>(draws));
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, draws));

    if (threads == 1) {
        for (int b = 0; b < draws; ++b) {
            sup_stats[static_cast<std::size_t>(b)] = stein_draw_max(spec, dataset, seed, b);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int b = t; b < draws; b += threads) {
                    sup_stats[static_cast<std::size_t>(b)] = stein_draw_max(spec, dataset, seed, b);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // ceil((1-alpha)*draws)-th order statistic, 1-indexed.
    const auto rank = static_cast<std::size_t>(
        std::ceil((1.0 - spec.alpha) * static_cast<double>(draws)));
    const std::size_t idx = std::min(sup_stats.size(), std::max<std::size_t>(rank, 1)) - 1;
    std::nth_element(sup_stats.begin(), sup_stats.begin() + static_cast<std::ptrdiff_t>(idx),
                     sup_stats.end());
    const double z = sup_stats[idx];

    PenaltyEstimate est;
    est.lambda = spec.c * z / std::sqrt(static_cast<double>(dataset.n()));
    est.method = Method::SteinMc;
    est.quantile = z;
    est.draws = draws;
    est.seed = seed;
    return est;
}

bool coverage_check(const ProblemSpec& spec, const Dataset& dataset,
                    const Eigen::VectorXd& beta_star, double lambda) {
    const Eigen::VectorXd g = gradient(spec, dataset, beta_star);
    return spec.c * g.cwiseAbs().maxCoeff() <= lambda;
}

}  // namespace penlevel
