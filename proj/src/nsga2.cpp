#include "moho/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace moho {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool pareto_dominates(const Vector& a, const Vector& b) {
    bool any_strict = false;
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) any_strict = true;
    }
    return any_strict;
}

double violation_of(const Vector& g, const Vector& h, double eq_tolerance) {
    double total = 0.0;
    for (int i = 0; i < g.size(); ++i) total += std::max(0.0, g[i]);
    for (int j = 0; j < h.size(); ++j) total += std::max(0.0, std::abs(h[j]) - eq_tolerance);
    return total;
}

Individual evaluate_individual(const ProblemDefinition& pb, Vector x, double eq_tolerance,
                               EvalCounters& counters) {
    Individual ind;
    ind.f = evaluate_objectives(pb, x, counters);
    auto [g, h] = evaluate_constraints(pb, x, counters);
    ind.violation = violation_of(g, h, eq_tolerance);
    ind.x = std::move(x);
    return ind;
}

// Tournament on (rank, crowding); the earlier pick wins ties.
int tournament(const std::vector<Individual>& pop, std::mt19937_64& rng) {
    const int a = static_cast<int>(rng() % pop.size());
    const int b = static_cast<int>(rng() % pop.size());
    const Individual& ia = pop[static_cast<std::size_t>(a)];
    const Individual& ib = pop[static_cast<std::size_t>(b)];
    if (ia.rank != ib.rank) return ia.rank < ib.rank ? a : b;
    if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding ? a : b;
    return a;
}

// Simulated binary crossover on one coordinate pair.
void sbx_pair(double& c1, double& c2, double lo, double hi, double eta,
              std::mt19937_64& rng) {
    if (std::abs(c1 - c2) < 1e-14) return;
    const double y1 = std::min(c1, c2);
    const double y2 = std::max(c1, c2);
    const double rand = next_uniform(rng);

    auto spread = [&](double bound_gap) {
        const double beta = 1.0 + 2.0 * bound_gap / (y2 - y1);
        const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
        if (rand <= 1.0 / alpha) return std::pow(rand * alpha, 1.0 / (eta + 1.0));
        return std::pow(1.0 / (2.0 - rand * alpha), 1.0 / (eta + 1.0));
    };
    const double beta_l = spread(y1 - lo);
    const double beta_u = spread(hi - y2);
    double child1 = 0.5 * ((y1 + y2) - beta_l * (y2 - y1));
    double child2 = 0.5 * ((y1 + y2) + beta_u * (y2 - y1));
    child1 = std::clamp(child1, lo, hi);
    child2 = std::clamp(child2, lo, hi);
    if (next_uniform(rng) < 0.5) std::swap(child1, child2);
    c1 = child1;
    c2 = child2;
}

void polynomial_mutation(Vector& x, const Box& box, double prob, double eta,
                         std::mt19937_64& rng) {
    for (int i = 0; i < x.size(); ++i) {
        if (next_uniform(rng) >= prob) continue;
        const double lo = box.lower[i], hi = box.upper[i];
        const double span = hi - lo;
        const double rand = next_uniform(rng);
        const double delta1 = (x[i] - lo) / span;
        const double delta2 = (hi - x[i]) / span;
        double deltaq;
        if (rand < 0.5) {
            const double val = 2.0 * rand +
                               (1.0 - 2.0 * rand) * std::pow(1.0 - delta1, eta + 1.0);
            deltaq = std::pow(val, 1.0 / (eta + 1.0)) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - rand) +
                               2.0 * (rand - 0.5) * std::pow(1.0 - delta2, eta + 1.0);
            deltaq = 1.0 - std::pow(val, 1.0 / (eta + 1.0));
        }
        x[i] = std::clamp(x[i] + deltaq * span, lo, hi);
    }
}

void assign_ranks_and_crowding(std::vector<Individual>& pop,
                               std::vector<std::vector<int>>& fronts) {
    fronts = fast_nondominated_sort(pop);
    for (const auto& front_indices : fronts) {
        std::vector<Individual> front;
        front.reserve(front_indices.size());
        for (int idx : front_indices) front.push_back(pop[static_cast<std::size_t>(idx)]);
        const std::vector<double> crowd = crowding_distance(front);
        for (std::size_t i = 0; i < front_indices.size(); ++i) {
            pop[static_cast<std::size_t>(front_indices[i])].crowding = crowd[i];
        }
    }
}

}  // namespace

void GaConfig::validate() const {
    if (population < 4 || population % 2 != 0) {
        throw std::invalid_argument("population must be even and >= 4");
    }
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (crossover_prob < 0.0 || crossover_prob > 1.0 ||
        (mutation_prob >= 0.0 && mutation_prob > 1.0)) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    if (eq_tolerance <= 0.0) throw std::invalid_argument("eq_tolerance must be positive");
}

bool constraint_dominates(const Individual& a, const Individual& b) {
    const bool a_feasible = a.violation == 0.0;
    const bool b_feasible = b.violation == 0.0;
    if (a_feasible != b_feasible) return a_feasible;
    if (!a_feasible) return a.violation < b.violation;
    return pareto_dominates(a.f, b.f);
}

std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop) {
    const int count = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated(static_cast<std::size_t>(count));
    std::vector<int> domination_count(static_cast<std::size_t>(count), 0);
    std::vector<std::vector<int>> fronts;

    std::vector<int> current;
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j) {
            if (i == j) continue;
            if (constraint_dominates(pop[static_cast<std::size_t>(i)],
                                     pop[static_cast<std::size_t>(j)])) {
                dominated[static_cast<std::size_t>(i)].push_back(j);
            } else if (constraint_dominates(pop[static_cast<std::size_t>(j)],
                                            pop[static_cast<std::size_t>(i)])) {
                ++domination_count[static_cast<std::size_t>(i)];
            }
        }
        if (domination_count[static_cast<std::size_t>(i)] == 0) {
            pop[static_cast<std::size_t>(i)].rank = 1;
            current.push_back(i);
        }
    }
    int rank = 1;
    while (!current.empty()) {
        std::sort(current.begin(), current.end());
        fronts.push_back(current);
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated[static_cast<std::size_t>(i)]) {
                if (--domination_count[static_cast<std::size_t>(j)] == 0) {
                    pop[static_cast<std::size_t>(j)].rank = rank + 1;
                    next.push_back(j);
                }
            }
        }
        ++rank;
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& front) {
    const int count = static_cast<int>(front.size());
    if (count == 0) throw std::invalid_argument("crowding_distance needs a nonempty front");
    std::vector<double> distance(static_cast<std::size_t>(count), 0.0);
    if (count <= 2) {
        std::fill(distance.begin(), distance.end(), kInf);
        return distance;
    }
    const int p = static_cast<int>(front.front().f.size());
    std::vector<int> order(static_cast<std::size_t>(count));
    for (int obj = 0; obj < p; ++obj) {
        for (int i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return front[static_cast<std::size_t>(a)].f[obj] <
                   front[static_cast<std::size_t>(b)].f[obj];
        });
        const double fmin = front[static_cast<std::size_t>(order.front())].f[obj];
        const double fmax = front[static_cast<std::size_t>(order.back())].f[obj];
        distance[static_cast<std::size_t>(order.front())] = kInf;
        distance[static_cast<std::size_t>(order.back())] = kInf;
        if (fmax - fmin <= 0.0) continue;
        for (int i = 1; i + 1 < count; ++i) {
            const double gap = front[static_cast<std::size_t>(order[static_cast<std::size_t>(i + 1)])].f[obj] -
                               front[static_cast<std::size_t>(order[static_cast<std::size_t>(i - 1)])].f[obj];
            double& d = distance[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            if (!std::isinf(d)) d += gap / (fmax - fmin);
        }
    }
    return distance;
}

EvolveResult evolve(const ProblemDefinition& pb, const GaConfig& cfg, EvalCounters& counters) {
    cfg.validate();
    const int n = pb.n();
    const int pop_size = cfg.population;
    const double mutation_prob = cfg.mutation_prob < 0.0 ? 1.0 / n : cfg.mutation_prob;
    const Box& box = pb.sampling_box();

    std::mt19937_64 rng(cfg.seed);
    std::vector<Individual> pop;
    pop.reserve(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) {
        Vector x(n);
        for (int d = 0; d < n; ++d) {
            x[d] = box.lower[d] + (box.upper[d] - box.lower[d]) * next_uniform(rng);
        }
        pop.push_back(evaluate_individual(pb, std::move(x), cfg.eq_tolerance, counters));
    }
    std::vector<std::vector<int>> fronts;
    assign_ranks_and_crowding(pop, fronts);

    EvolveResult result;
    auto min_violation = [](const std::vector<Individual>& population) {
        double best = kInf;
        for (const Individual& ind : population) best = std::min(best, ind.violation);
        return best;
    };
    result.min_violation_history.push_back(min_violation(pop));

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<Individual> offspring;
        offspring.reserve(static_cast<std::size_t>(pop_size));
        while (static_cast<int>(offspring.size()) < pop_size) {
            const Individual& parent1 = pop[static_cast<std::size_t>(tournament(pop, rng))];
            const Individual& parent2 = pop[static_cast<std::size_t>(tournament(pop, rng))];
            Vector c1 = parent1.x;
            Vector c2 = parent2.x;
            if (next_uniform(rng) < cfg.crossover_prob) {
                for (int d = 0; d < n; ++d) {
                    if (next_uniform(rng) < 0.5) {
                        sbx_pair(c1[d], c2[d], box.lower[d], box.upper[d], cfg.crossover_eta,
                                 rng);
                    }
                }
            }
            polynomial_mutation(c1, box, mutation_prob, cfg.mutation_eta, rng);
            polynomial_mutation(c2, box, mutation_prob, cfg.mutation_eta, rng);
            offspring.push_back(evaluate_individual(pb, std::move(c1), cfg.eq_tolerance, counters));
            if (static_cast<int>(offspring.size()) < pop_size) {
                offspring.push_back(
                    evaluate_individual(pb, std::move(c2), cfg.eq_tolerance, counters));
            }
        }

        // Elitist mu+lambda truncation of the combined population.
        std::vector<Individual> combined = pop;
        combined.insert(combined.end(), offspring.begin(), offspring.end());
        std::vector<std::vector<int>> combined_fronts;
        assign_ranks_and_crowding(combined, combined_fronts);

        std::vector<Individual> next;
        next.reserve(static_cast<std::size_t>(pop_size));
        for (const auto& front_indices : combined_fronts) {
            if (static_cast<int>(next.size() + front_indices.size()) <= pop_size) {
                for (int idx : front_indices) {
                    next.push_back(combined[static_cast<std::size_t>(idx)]);
                }
                continue;
            }
            std::vector<int> sorted = front_indices;
            std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
                return combined[static_cast<std::size_t>(a)].crowding >
                       combined[static_cast<std::size_t>(b)].crowding;
            });
            for (int idx : sorted) {
                if (static_cast<int>(next.size()) == pop_size) break;
                next.push_back(combined[static_cast<std::size_t>(idx)]);
            }
            break;
        }
        pop = std::move(next);
        assign_ranks_and_crowding(pop, fronts);
        result.min_violation_history.push_back(min_violation(pop));
    }

    // Final front: feasible rank-1 individuals, or the least-violating ones
    // flagged infeasible when nothing is feasible.
    std::ostringstream params;
    params << "N=" << cfg.population << ",T=" << cfg.generations << ",seed=" << cfg.seed;
    std::vector<const Individual*> front1;
    for (int idx : fronts.front()) front1.push_back(&pop[static_cast<std::size_t>(idx)]);

    for (const Individual* ind : front1) result.any_feasible |= ind->violation == 0.0;
    for (const Individual* ind : front1) {
        if (result.any_feasible && ind->violation > 0.0) continue;
        FrontEntry entry;
        entry.x = ind->x;
        entry.f = ind->f;
        entry.method = "nsga2";
        entry.params = params.str();
        entry.feasibility =
            feasibility_report(pb, ind->x, counters, kFrontTolG, cfg.eq_tolerance);
        entry.kkt_residual = std::numeric_limits<double>::quiet_NaN();  // not a KKT method
        result.front.entries.push_back(std::move(entry));
    }
    if (!result.any_feasible) {
        result.front.notes.push_back("no feasible individual; least-violation front returned");
    }
    result.final_population = std::move(pop);
    return result;
}

}  // namespace moho
