// oracle.cpp — RK4 master-equation integrator and Monte-Carlo wave-function sampler

#include "twomode/oracle.hpp"

#include "twomode/effective.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace twomode {

// ------------------------------- RK4 ---------------------------------------

IntegratorConfig IntegratorConfig::for_params(const ModelParams& params, bool refine) {
    const double rate = std::max({params.g(), params.gamma_a(), params.gamma_b(), 1e-30});
    return {0.01 / rate, refine};
}

IntegratorConfig IntegratorConfig::for_state(const ModelParams& params, const DensityMatrix& rho0, bool refine) {
    int max_total = 0;
    for (int i = 0; i < rho0.dim(); ++i) {
        if (rho0.matrix().row(i).cwiseAbs().maxCoeff() > 0.0 || rho0.matrix().col(i).cwiseAbs().maxCoeff() > 0.0) {
            max_total = std::max(max_total, occupation(i, rho0.space()).total());
        }
    }
    IntegratorConfig config = for_params(params, refine);
    config.step *= std::min(1.0, 2.0 / std::max(max_total, 1));
    return config;
}

void IntegratorConfig::validate(const ModelParams& params) const {
    const double rate = std::max({params.g(), params.gamma_a(), params.gamma_b(), 1e-30});
    if (!(step > 0.0) || step > 0.01 / rate * (1.0 + 1e-12)) {
        throw ConfigurationError("IntegratorConfig: step must be in (0, 0.01/max(g, gamma_a, gamma_b)]");
    }
}

namespace {

void rk4_advance(CMatrix& rho, const FockSpace& space, const ModelParams& params, double length, double max_step) {
    if (length <= 0.0) {
        return;
    }
    const auto steps = static_cast<long>(std::ceil(length / max_step - 1e-12));
    const double h = length / static_cast<double>(steps);
    auto rhs = [&](const CMatrix& r) { return lindblad_rhs(params, DensityMatrix(space, r)).matrix(); };
    for (long s = 0; s < steps; ++s) {
        const CMatrix k1 = rhs(rho);
        const CMatrix k2 = rhs(rho + (h / 2.0) * k1);
        const CMatrix k3 = rhs(rho + (h / 2.0) * k2);
        const CMatrix k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

std::vector<DensityMatrix> integrate_fixed(const DensityMatrix& rho0, const ModelParams& params,
                                           const std::vector<double>& z_grid, double step) {
    std::vector<DensityMatrix> out;
    out.reserve(z_grid.size());
    CMatrix rho = rho0.matrix();
    double z_prev = 0.0;
    for (double z : z_grid) {
        rk4_advance(rho, rho0.space(), params, z - z_prev, step);
        out.emplace_back(rho0.space(), rho);
        z_prev = z;
    }
    return out;
}

}  // namespace

std::vector<DensityMatrix> integrate_lindblad(const DensityMatrix& rho0, const ModelParams& params,
                                              const std::vector<double>& z_grid, const IntegratorConfig& config) {
    config.validate(params);
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        if (!(z_grid[i] >= 0.0) || (i > 0 && !(z_grid[i] >= z_grid[i - 1]))) {
            throw std::domain_error("integrate_lindblad: z grid must be non-negative and non-decreasing");
        }
    }
    double step = config.step;
    std::vector<DensityMatrix> current = integrate_fixed(rho0, params, z_grid, step);
    if (!config.refine) {
        return current;
    }
    const double floor = 1e-8 / std::max(params.g(), 1e-30);
    while (true) {
        step /= 2.0;
        if (step < floor) {
            throw NumericalFailure("integrate_lindblad: step-halving exhausted without convergence");
        }
        std::vector<DensityMatrix> finer = integrate_fixed(rho0, params, z_grid, step);
        double worst = 0.0;
        for (std::size_t i = 0; i < finer.size(); ++i) {
            worst = std::max(worst, trace_distance(finer[i], current[i]));
        }
        current = std::move(finer);
        if (worst < 1e-9) {
            return current;
        }
    }
}

DensityMatrix integrate_lindblad(const DensityMatrix& rho0, const ModelParams& params, double z,
                                 const IntegratorConfig& config) {
    if (!(z >= 0.0)) {
        throw std::domain_error("integrate_lindblad: z must be non-negative");
    }
    return integrate_lindblad(rho0, params, std::vector<double>{z}, config).front();
}

// --------------------------- Quantum trajectories --------------------------

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t trajectory) {
    std::uint64_t z = master + (trajectory + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double default_trajectory_step(const ModelParams& params, const StateVector& psi0) {
    int max_total = 0;
    for (int i = 0; i < psi0.space().dim(); ++i) {
        if (psi0.amplitudes()(i) != Complex(0.0, 0.0)) {
            max_total = std::max(max_total, occupation(i, psi0.space()).total());
        }
    }
    const double rate = std::max({params.g(), 2.0 * params.gamma_a() * max_total, 2.0 * params.gamma_b() * max_total});
    return rate > 0.0 ? std::min(0.01, 0.05 / rate) : 0.01;
}

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

constexpr std::size_t kBlock = 256;

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum{0.0};
    double carry{0.0};

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    void add(const CompensatedSum& other) {
        add(other.sum);
        add(other.carry);
    }
    double value() const { return sum + carry; }
};

struct PointAccumulator {
    std::size_t count{0};
    CompensatedSum sum;
    CompensatedSum sum_sq;
};

struct TrajectoryModel {
    FockSpace space;
    ModelParams params;
    SparseC a;
    SparseC b;
    SparseC h;
    RVector n_a;
    RVector n_b;
    bool diagonal_observable;
    RVector observable_diag;
    CMatrix observable;
};

SparseC to_sparse(const CMatrix& m) { return m.sparseView(); }

double expectation(const TrajectoryModel& model, const CVector& psi) {
    if (model.diagonal_observable) {
        return model.observable_diag.dot(psi.cwiseAbs2());
    }
    return psi.dot(model.observable * psi).real();
}

// Runs one trajectory and appends its observable at each stop index.
void run_trajectory(const TrajectoryModel& model, const CVector& psi0, const std::vector<long>& stops,
                    const std::vector<double>& step_sizes, std::uint64_t seed, std::vector<double>& values) {
    std::mt19937_64 gen(seed);
    const Complex minus_i(0.0, -1.0);
    const double ga = model.params.gamma_a();
    const double gb = model.params.gamma_b();
    CVector psi = psi0;
    std::size_t next_stop = 0;
    long step_index = 0;
    auto record = [&] {
        while (next_stop < stops.size() && stops[next_stop] == step_index) {
            values.push_back(expectation(model, psi));
            ++next_stop;
        }
    };
    record();
    while (next_stop < stops.size()) {
        const double dz = step_sizes[next_stop];
        const RVector abs2 = psi.cwiseAbs2();
        const double dp_a = 2.0 * ga * model.n_a.dot(abs2) * dz;
        const double dp_b = 2.0 * gb * model.n_b.dot(abs2) * dz;
        if (dp_a + dp_b > 0.1) {
            throw ConfigurationError("mc_trajectories: jump probability per step exceeds 0.1; reduce dz");
        }
        const double r = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        if (r < dp_a) {
            psi = model.a * psi;
        } else if (r < dp_a + dp_b) {
            psi = model.b * psi;
        } else {
            const CVector k1 = minus_i * (model.h * psi);
            const CVector k2 = minus_i * (model.h * (psi + (dz / 2.0) * k1));
            const CVector k3 = minus_i * (model.h * (psi + (dz / 2.0) * k2));
            const CVector k4 = minus_i * (model.h * (psi + dz * k3));
            psi += (dz / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        psi /= psi.norm();
        ++step_index;
        record();
    }
}

}  // namespace

std::vector<TrajectoryStats> mc_trajectories(const StateVector& psi0, const ModelParams& params,
                                             const std::vector<double>& z_grid, const Operator& observable,
                                             const TrajectoryConfig& config) {
    require_same_space(psi0.space(), observable.space(), "mc_trajectories");
    if (std::abs(psi0.norm() - 1.0) > 1e-12) {
        throw ConfigurationError("mc_trajectories: initial state must be normalized");
    }
    if (config.n_traj < 2) {
        throw ConfigurationError("mc_trajectories: need at least 2 trajectories");
    }
    if (config.dz < 0.0) {
        throw ConfigurationError("mc_trajectories: dz must be non-negative");
    }
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        if (!(z_grid[i] >= 0.0) || (i > 0 && !(z_grid[i] >= z_grid[i - 1]))) {
            throw std::domain_error("mc_trajectories: z grid must be non-negative and non-decreasing");
        }
    }
    const FockSpace& space = psi0.space();
    const double dz_target = config.dz > 0.0 ? config.dz : default_trajectory_step(params, psi0);

    // Stop at each grid point exactly: segment i is split into equal steps no longer than dz_target.
    std::vector<long> stops;
    std::vector<double> step_sizes;
    long total_steps = 0;
    double z_prev = 0.0;
    for (double z : z_grid) {
        const double length = z - z_prev;
        const long n = length > 0.0 ? static_cast<long>(std::ceil(length / dz_target - 1e-12)) : 0;
        step_sizes.push_back(n > 0 ? length / static_cast<double>(n) : dz_target);
        total_steps += n;
        stops.push_back(total_steps);
        z_prev = z;
    }
    // step_sizes[i] is used while heading to stop i.

    const CMatrix& obs = observable.matrix();
    const bool diagonal = (obs - CMatrix(obs.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0 &&
                          obs.diagonal().imag().cwiseAbs().maxCoeff() == 0.0;
    RVector n_a(space.dim());
    RVector n_b(space.dim());
    for (int i = 0; i < space.dim(); ++i) {
        n_a(i) = occupation(i, space).n_a;
        n_b(i) = occupation(i, space).n_b;
    }
    const TrajectoryModel model{space,
                                params,
                                to_sparse(annihilation(Mode::a, space).matrix()),
                                to_sparse(annihilation(Mode::b, space).matrix()),
                                to_sparse(h_eff(params, space).matrix()),
                                n_a,
                                n_b,
                                diagonal,
                                obs.diagonal().real(),
                                obs};

    const std::size_t n_points = z_grid.size();
    const std::size_t n_blocks = (config.n_traj + kBlock - 1) / kBlock;
    std::vector<std::vector<PointAccumulator>> blocks(n_blocks, std::vector<PointAccumulator>(n_points));

    std::atomic<std::size_t> next_block{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        std::vector<double> values;
        values.reserve(n_points);
        for (std::size_t blk = next_block++; blk < n_blocks; blk = next_block++) {
            try {
                const std::size_t begin = blk * kBlock;
                const std::size_t end = std::min(config.n_traj, begin + kBlock);
                for (std::size_t t = begin; t < end; ++t) {
                    values.clear();
                    run_trajectory(model, psi0.amplitudes(), stops, step_sizes, trajectory_seed(config.seed, t), values);
                    for (std::size_t p = 0; p < n_points; ++p) {
                        auto& acc = blocks[blk][p];
                        ++acc.count;
                        acc.sum.add(values[p]);
                        acc.sum_sq.add(values[p] * values[p]);
                    }
                }
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next_block = n_blocks;
            }
        }
    };

    unsigned threads = config.threads > 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<TrajectoryStats> out;
    out.reserve(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
        PointAccumulator total;
        for (const auto& blk : blocks) {
            total.count += blk[p].count;
            total.sum.add(blk[p].sum);
            total.sum_sq.add(blk[p].sum_sq);
        }
        const auto n = static_cast<double>(total.count);
        const double mean = total.sum.value() / n;
        const double var = std::max(0.0, (total.sum_sq.value() - n * mean * mean) / (n - 1.0));
        out.push_back({total.count, mean, std::sqrt(var / n), config.seed, kTrajectoryRng});
    }
    return out;
}

TrajectoryStats mc_trajectories(const StateVector& psi0, const ModelParams& params, double z,
                                const Operator& observable, const TrajectoryConfig& config) {
    return mc_trajectories(psi0, params, std::vector<double>{z}, observable, config).front();
}

}  // namespace twomode
