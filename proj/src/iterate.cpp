#include "infharm/iterate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "infharm/errors.hpp"

namespace infharm {

namespace {

void require_valid(const BoundaryProblem& problem) {
    auto violations = validate(problem);
    if (!violations.empty()) throw ValidationError(std::move(violations));
}

struct Weights {
    std::vector<Rational> p, q;  // indexed by vertex; meaningful for interior
};

Weights interior_weights(const BoundaryProblem& problem) {
    int n = problem.graph.vertex_count();
    Weights w;
    w.p.resize(n);
    w.q.resize(n);
    for (int v = 0; v < n; ++v) {
        if (problem.is_boundary(v)) continue;
        w.p[v] = problem.bias.p_at(v);
        w.q[v] = problem.bias.q_at(v);
    }
    return w;
}

void sweep_into(const BoundaryProblem& problem, const Weights& w,
                const std::vector<Rational>& from, std::vector<Rational>& to) {
    int n = problem.graph.vertex_count();
    for (int v = 0; v < n; ++v) {
        if (problem.is_boundary(v)) {
            to[v] = from[v];
            continue;
        }
        auto nbrs = problem.graph.neighbors(v);
        const Rational* mx = &from[nbrs.front().to];
        const Rational* mn = mx;
        for (const auto& nb : nbrs.subspan(1)) {
            const Rational& val = from[nb.to];
            if (val > *mx) mx = &val;
            if (val < *mn) mn = &val;
        }
        to[v] = w.p[v] * *mx + w.q[v] * *mn;
    }
}

unsigned long bit_length(const Rational& x) {
    return mpz_sizeinbase(x.numerator().get_mpz_t(), 2) +
           mpz_sizeinbase(x.denominator().get_mpz_t(), 2);
}

// Interior vertices in ascending order.
std::vector<int> interior_of(const BoundaryProblem& problem) {
    return problem.interior();
}

// Exact k x k Gaussian elimination, partial pivoting on the largest
// absolute value. Returns false when the matrix is singular.
bool solve_linear(std::vector<std::vector<Rational>>& a,
                  std::vector<Rational>& b, std::vector<Rational>& out) {
    std::size_t k = b.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        Rational best = a[col][col].abs();
        for (std::size_t row = col + 1; row < k; ++row) {
            Rational cand = a[row][col].abs();
            if (cand > best) {
                best = cand;
                pivot = row;
            }
        }
        if (best.is_zero()) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < k; ++row) {
            if (a[row][col].is_zero()) continue;
            Rational f = a[row][col] / a[col][col];
            a[row][col] = Rational(0);
            for (std::size_t j = col + 1; j < k; ++j)
                a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    out.assign(k, Rational(0));
    for (std::size_t i = k; i-- > 0;) {
        Rational acc = b[i];
        for (std::size_t j = i + 1; j < k; ++j) acc -= a[i][j] * out[j];
        out[i] = acc / a[i][i];
    }
    return true;
}

// Per-vertex direction alternatives, in a fixed order so enumeration is
// deterministic: a single neighbor pairs with itself, otherwise all ordered
// pairs of distinct neighbors sorted by (max_to, min_to).
std::vector<DirectionChoice> choices_at(const Graph& graph, int v) {
    auto nbrs = graph.neighbors(v);
    std::vector<DirectionChoice> out;
    if (nbrs.size() == 1) {
        out.push_back({nbrs.front().to, nbrs.front().to});
        return out;
    }
    for (const auto& a : nbrs)
        for (const auto& b : nbrs)
            if (a.to != b.to) out.push_back({a.to, b.to});
    return out;
}

}  // namespace

std::vector<Rational> sweep_once(const BoundaryProblem& problem,
                                 const std::vector<Rational>& current) {
    int n = problem.graph.vertex_count();
    if (static_cast<int>(current.size()) != n)
        throw std::invalid_argument("value table size mismatch");
    Weights w = interior_weights(problem);
    std::vector<Rational> next(n);
    sweep_into(problem, w, current, next);
    return next;
}

Rational default_tolerance() {
    return Rational(1) / Rational(2).pow(40);
}

unsigned long default_max_sweeps(const BoundaryProblem& problem) {
    Rational range =
        problem.max_boundary_value() - problem.min_boundary_value();
    return 10ul * problem.graph.vertex_count() * (1 + bit_length(range));
}

IterationResult value_iteration(const BoundaryProblem& problem,
                                const Rational& tolerance,
                                unsigned long max_sweeps,
                                const SweepObserver& observer) {
    require_valid(problem);
    int n = problem.graph.vertex_count();
    Weights w = interior_weights(problem);
    Rational m = problem.min_boundary_value();
    Rational M = problem.max_boundary_value();

    IterationResult res;
    res.lower.assign(n, m);
    res.upper.assign(n, M);
    for (int v : problem.boundary) res.lower[v] = res.upper[v] = problem.value_at(v);

    auto gap = [&] {
        Rational g(0);
        for (int v = 0; v < n; ++v) {
            Rational d = res.upper[v] - res.lower[v];
            if (d > g) g = d;
        }
        return g;
    };

    res.max_gap = gap();
    res.converged = res.max_gap <= tolerance;
    std::vector<Rational> scratch(n);
    while (!res.converged && res.sweeps < max_sweeps) {
        sweep_into(problem, w, res.lower, scratch);
        res.lower.swap(scratch);
        sweep_into(problem, w, res.upper, scratch);
        res.upper.swap(scratch);
        ++res.sweeps;
        if (observer) observer(res.sweeps, res.lower, res.upper);
        res.max_gap = gap();
        res.converged = res.max_gap <= tolerance;
    }
    return res;
}

IterationResult value_iteration(const BoundaryProblem& problem) {
    return value_iteration(problem, default_tolerance(),
                           default_max_sweeps(problem));
}

Strategy extract_directions(const BoundaryProblem& problem,
                            const std::vector<Rational>& values) {
    if (values.size() != static_cast<std::size_t>(problem.graph.vertex_count()))
        throw std::invalid_argument("value table size mismatch");
    Strategy s;
    for (int v : problem.interior()) {
        auto nbrs = problem.graph.neighbors(v);
        int amax = nbrs.front().to, amin = amax;
        for (const auto& nb : nbrs.subspan(1)) {
            if (values[nb.to] > values[amax]) amax = nb.to;
            if (values[nb.to] < values[amin]) amin = nb.to;
        }
        s.emplace(v, DirectionChoice{amax, amin});
    }
    return s;
}

DirectionSolve solve_with_directions(const BoundaryProblem& problem,
                                     const Strategy& strategy) {
    require_valid(problem);
    std::vector<int> interior = interior_of(problem);
    int n = problem.graph.vertex_count();
    std::vector<int> index(n, -1);
    for (std::size_t i = 0; i < interior.size(); ++i) index[interior[i]] = i;

    for (int v : interior) {
        auto it = strategy.find(v);
        if (it == strategy.end())
            throw Error("no direction choice for vertex \"" +
                        problem.graph.label(v) + "\"");
        for (int to : {it->second.max_to, it->second.min_to})
            if (to < 0 || to >= n || !problem.graph.edge_between(v, to))
                throw Error("direction at \"" + problem.graph.label(v) +
                            "\" names a non-neighbor");
    }
    for (const auto& [v, choice] : strategy)
        if (v < 0 || v >= n || index[v] < 0)
            throw Error("direction choice at the non-interior vertex " +
                        std::to_string(v));

    std::size_t k = interior.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    for (std::size_t i = 0; i < k; ++i) {
        int v = interior[i];
        const DirectionChoice& c = strategy.at(v);
        a[i][i] += Rational(1);
        Rational p = problem.bias.p_at(v), q = problem.bias.q_at(v);
        for (auto [to, weight] :
             {std::pair{c.max_to, p}, std::pair{c.min_to, q}}) {
            if (problem.is_boundary(to))
                b[i] += weight * problem.value_at(to);
            else
                a[i][index[to]] -= weight;
        }
    }

    DirectionSolve out;
    std::vector<Rational> solved;
    if (!solve_linear(a, b, solved)) {
        out.status = DirectionStatus::singular;
        return out;
    }

    out.values.resize(n);
    for (int v : problem.boundary) out.values[v] = problem.value_at(v);
    for (std::size_t i = 0; i < k; ++i) out.values[interior[i]] = solved[i];

    out.status = DirectionStatus::consistent;
    for (int v : interior) {
        auto nbrs = problem.graph.neighbors(v);
        Rational mx = out.values[nbrs.front().to], mn = mx;
        for (const auto& nb : nbrs.subspan(1)) {
            const Rational& val = out.values[nb.to];
            if (val > mx) mx = val;
            if (val < mn) mn = val;
        }
        const DirectionChoice& c = strategy.at(v);
        if (out.values[c.max_to] != mx || out.values[c.min_to] != mn) {
            out.status = DirectionStatus::inconsistent;
            out.offending_vertex = v;
            break;
        }
    }
    return out;
}

BruteForce brute_force_solve(const BoundaryProblem& problem,
                             unsigned long cap) {
    require_valid(problem);
    std::vector<int> interior = interior_of(problem);
    std::vector<std::vector<DirectionChoice>> choices;
    choices.reserve(interior.size());
    unsigned long total = 1;
    for (int v : interior) {
        choices.push_back(choices_at(problem.graph, v));
        unsigned long c = choices.back().size();
        if (total > cap / c)
            throw Error("direction enumeration exceeds the cap of " +
                        std::to_string(cap) + " choices");
        total *= c;
    }

    BruteForce out;
    std::vector<std::size_t> pick(interior.size(), 0);
    for (;;) {
        Strategy s;
        for (std::size_t i = 0; i < interior.size(); ++i)
            s.emplace(interior[i], choices[i][pick[i]]);
        ++out.enumerated;
        DirectionSolve ds = solve_with_directions(problem, s);
        if (ds.status == DirectionStatus::consistent) {
            if (out.consistent > 0 && ds.values != out.values)
                throw std::logic_error(
                    "two consistent direction choices disagree");
            out.values = std::move(ds.values);
            ++out.consistent;
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size())
            pick[i++] = 0;
        if (i == pick.size()) break;
    }
    if (out.consistent == 0)
        throw std::logic_error("no direction choice was consistent");
    return out;
}

HybridSolve solve_hybrid(const BoundaryProblem& problem,
                         const Rational& tolerance, unsigned long max_sweeps,
                         unsigned undecided_cap) {
    IterationResult it = value_iteration(problem, tolerance, max_sweeps);
    std::vector<int> interior = interior_of(problem);

    // A neighbor can still be the max if its upper iterate reaches the best
    // lower iterate in the neighborhood (dually for min); the true argmax
    // and argmin always survive this filter.
    std::vector<std::vector<DirectionChoice>> choices;
    std::vector<int> undecided;
    Strategy fixed;
    for (int v : interior) {
        auto nbrs = problem.graph.neighbors(v);
        Rational best_lo = it.lower[nbrs.front().to];
        Rational best_hi = it.upper[nbrs.front().to];
        for (const auto& nb : nbrs.subspan(1)) {
            if (it.lower[nb.to] > best_lo) best_lo = it.lower[nb.to];
            if (it.upper[nb.to] < best_hi) best_hi = it.upper[nb.to];
        }
        std::vector<int> max_cand, min_cand;
        for (const auto& nb : nbrs) {
            if (it.upper[nb.to] >= best_lo) max_cand.push_back(nb.to);
            if (it.lower[nb.to] <= best_hi) min_cand.push_back(nb.to);
        }
        if (max_cand.size() == 1 && min_cand.size() == 1) {
            fixed.emplace(v, DirectionChoice{max_cand.front(), min_cand.front()});
            continue;
        }
        std::vector<DirectionChoice> local;
        if (nbrs.size() == 1) {
            local.push_back({nbrs.front().to, nbrs.front().to});
        } else {
            for (int a : max_cand)
                for (int b : min_cand)
                    if (a != b) local.push_back({a, b});
        }
        undecided.push_back(v);
        choices.push_back(std::move(local));
    }

    if (undecided.size() > undecided_cap)
        throw Error("direction choices stay open at " +
                    std::to_string(undecided.size()) +
                    " vertices, more than the cap of " +
                    std::to_string(undecided_cap));

    HybridSolve out;
    out.sweeps = it.sweeps;
    out.undecided = undecided;

    std::vector<std::size_t> pick(undecided.size(), 0);
    unsigned long consistent = 0;
    for (;;) {
        Strategy s = fixed;
        for (std::size_t i = 0; i < undecided.size(); ++i)
            s.emplace(undecided[i], choices[i][pick[i]]);
        DirectionSolve ds = solve_with_directions(problem, s);
        if (ds.status == DirectionStatus::consistent) {
            if (consistent > 0 && ds.values != out.values)
                throw std::logic_error(
                    "two consistent direction choices disagree");
            out.values = std::move(ds.values);
            ++consistent;
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == choices[i].size())
            pick[i++] = 0;
        if (i == pick.size()) break;
    }
    if (consistent == 0)
        throw std::logic_error("no direction choice was consistent");
    return out;
}

HybridSolve solve_hybrid(const BoundaryProblem& problem) {
    return solve_hybrid(problem, default_tolerance(),
                        default_max_sweeps(problem));
}

BoundaryProblem reduce_two_values(const BoundaryProblem& problem,
                                  const Rational& m, const Rational& M) {
    require_valid(problem);
    for (int v : problem.boundary) {
        const Rational& g = problem.value_at(v);
        if (!(m < g && g < M))
            throw Error("boundary value at \"" + problem.graph.label(v) +
                        "\" does not lie strictly between the pendant values");
    }

    int n = problem.graph.vertex_count();
    std::vector<std::string> labels;
    labels.reserve(n + 2 * problem.boundary.size());
    for (int v = 0; v < n; ++v) labels.push_back(problem.graph.label(v));
    auto unique_label = [&](std::string base) {
        while (std::find(labels.begin(), labels.end(), base) != labels.end())
            base += "'";
        return base;
    };

    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < problem.graph.edge_count(); ++e)
        edges.push_back(problem.graph.edge(e));

    BoundaryProblem out;
    out.boundary_values.clear();
    std::map<int, Rational> bias_table = problem.bias.is_uniform()
                                             ? std::map<int, Rational>{}
                                             : problem.bias.table();
    if (problem.bias.is_uniform())
        for (int v : problem.interior())
            bias_table.emplace(v, problem.bias.uniform_r());

    for (int v : problem.boundary) {
        int lo = labels.size();
        labels.push_back(unique_label(problem.graph.label(v) + "_lo"));
        int hi = labels.size();
        labels.push_back(unique_label(problem.graph.label(v) + "_hi"));
        edges.emplace_back(v, lo);
        edges.emplace_back(v, hi);
        out.boundary.push_back(lo);
        out.boundary.push_back(hi);
        out.boundary_values.emplace(lo, m);
        out.boundary_values.emplace(hi, M);
        const Rational& g = problem.value_at(v);
        bias_table.emplace(v, (M - g) / (g - m));
    }
    std::sort(out.boundary.begin(), out.boundary.end());
    out.graph = Graph::build(std::move(labels), std::move(edges));
    out.bias = Bias::per_vertex(std::move(bias_table));
    return out;
}

BoundaryProblem reduce_two_values(const BoundaryProblem& problem) {
    return reduce_two_values(problem, problem.min_boundary_value() - 1,
                             problem.max_boundary_value() + 1);
}

NormalizedTree normalize_tree(const BoundaryProblem& problem) {
    require_valid(problem);
    const Graph& g = problem.graph;
    int n = g.vertex_count();
    if (g.edge_count() != n - 1)
        throw Error("normalization needs a tree");

    std::vector<char> alive(n, 1);
    std::vector<int> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = g.neighbors(v).size();

    NormalizedTree out;
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1 && !problem.is_boundary(v)) queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        int donor = -1;
        for (const auto& nb : g.neighbors(v))
            if (alive[nb.to]) donor = nb.to;
        if (donor < 0) throw std::logic_error("leaf lost its neighbor");
        out.reconstruction.emplace_back(v, donor);
        alive[v] = 0;
        if (--deg[donor] == 1 && !problem.is_boundary(donor))
            queue.push_back(donor);
    }

    // The survivors form one subtree. Boundary vertices of surviving degree
    // >= 2 become detachment points: each incident edge ends up in its own
    // piece (tree edges through a vertex lead into disjoint subtrees), so
    // the vertex reappears as a boundary leaf of every adjacent piece.
    auto is_cut = [&](int v) {
        return problem.is_boundary(v) && deg[v] >= 2;
    };

    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> piece_vertices;
    for (int s = 0; s < n; ++s) {
        if (!alive[s] || seen[s] || is_cut(s)) continue;
        std::vector<int> comp, stack{s};
        seen[s] = 1;
        std::set<int> cuts;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (const auto& nb : g.neighbors(v)) {
                if (!alive[nb.to]) continue;
                if (is_cut(nb.to)) {
                    cuts.insert(nb.to);
                    continue;
                }
                if (!seen[nb.to]) {
                    seen[nb.to] = 1;
                    stack.push_back(nb.to);
                }
            }
        }
        comp.insert(comp.end(), cuts.begin(), cuts.end());
        std::sort(comp.begin(), comp.end());
        piece_vertices.push_back(std::move(comp));
    }
    // An edge joining two detachment points belongs to no component above
    // and forms a two-vertex piece of its own.
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        if (alive[u] && alive[v] && is_cut(u) && is_cut(v))
            piece_vertices.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(piece_vertices.begin(), piece_vertices.end());

    for (auto& vs : piece_vertices) {
        TreePiece piece;
        piece.original_ids = vs;
        std::vector<int> local(n, -1);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            local[vs[i]] = i;
            labels.push_back(g.label(vs[i]));
        }
        std::vector<std::pair<int, int>> edges;
        for (int v : vs) {
            if (is_cut(v)) continue;  // its piece edges appear from the far end
            for (const auto& nb : g.neighbors(v)) {
                if (!alive[nb.to] || local[nb.to] < 0) continue;
                if (v < nb.to || is_cut(nb.to))
                    edges.emplace_back(local[v], local[nb.to]);
            }
        }
        // Every edge with a non-cut endpoint was collected from that side
        // exactly once; what remains empty is the two-vertex cut-to-cut piece.
        if (edges.empty() && vs.size() == 2) edges.emplace_back(0, 1);

        BoundaryProblem sub;
        sub.graph = Graph::build(std::move(labels), std::move(edges));
        std::map<int, Rational> bias_table;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            int v = vs[i];
            if (problem.is_boundary(v)) {
                sub.boundary.push_back(i);
                sub.boundary_values.emplace(i, problem.value_at(v));
            } else if (!problem.bias.is_uniform()) {
                bias_table.emplace(i, problem.bias.r_at(v));
            }
        }
        sub.bias = problem.bias.is_uniform()
                       ? Bias::uniform(problem.bias.uniform_r())
                       : Bias::per_vertex(std::move(bias_table));
        piece.problem = std::move(sub);
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

std::vector<int> tree_harmonic_connection(const BoundaryProblem& problem,
                                          const std::vector<Rational>& values) {
    require_valid(problem);
    const Graph& g = problem.graph;
    int n = g.vertex_count();
    if (g.edge_count() != n - 1)
        throw Error("harmonic connection needs a tree");
    if (values.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("value table size mismatch");
    for (int v = 0; v < n; ++v) {
        bool leaf = g.neighbors(v).size() <= 1;
        if (leaf != problem.is_boundary(v))
            throw Error("harmonic connection needs the boundary to be "
                        "exactly the leaf set");
    }
    if (sweep_once(problem, values) != values)
        throw Error("the value table is not the solution of this problem");
    if (n == 1) return {0};

    std::vector<char> alive(n, 1);
    std::vector<int> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = g.neighbors(v).size();

    auto drop_subtree = [&](int root, int avoid) {
        std::vector<int> stack{root};
        alive[root] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& nb : g.neighbors(v)) {
                if (nb.to == avoid || !alive[nb.to]) continue;
                alive[nb.to] = 0;
                stack.push_back(nb.to);
            }
        }
    };

    for (;;) {
        int v = -1;
        for (int cand = 0; cand < n; ++cand)
            if (alive[cand] && !problem.is_boundary(cand) && deg[cand] >= 3) {
                v = cand;
                break;
            }
        if (v < 0) break;
        int amax = -1, amin = -1;
        for (const auto& nb : g.neighbors(v)) {
            if (!alive[nb.to]) continue;
            if (amax < 0 || values[nb.to] > values[amax]) amax = nb.to;
            if (amin < 0 || values[nb.to] < values[amin]) amin = nb.to;
        }
        if (amin == amax) {  // all surviving neighbors equal; keep two
            for (const auto& nb : g.neighbors(v))
                if (alive[nb.to] && nb.to != amax) {
                    amin = std::min(amax, nb.to);
                    amax = std::max(amax, nb.to);
                    break;
                }
        }
        for (const auto& nb : g.neighbors(v)) {
            if (!alive[nb.to] || nb.to == amax || nb.to == amin) continue;
            drop_subtree(nb.to, v);
            --deg[v];
        }
    }

    int first = -1;
    for (int v = 0; v < n && first < 0; ++v) {
        if (!alive[v]) continue;
        int d = 0;
        for (const auto& nb : g.neighbors(v)) d += alive[nb.to];
        if (d <= 1) first = v;
    }
    if (first < 0) throw std::logic_error("pruned tree has no endpoint");

    std::vector<int> path{first};
    int prev = -1;
    for (int v = first;;) {
        int next = -1;
        for (const auto& nb : g.neighbors(v))
            if (alive[nb.to] && nb.to != prev) next = nb.to;
        if (next < 0) break;
        path.push_back(next);
        prev = v;
        v = next;
    }

    const Rational& a = values[path.front()];
    const Rational& b = values[path.back()];
    if (b < a || (a == b && path.back() < path.front()))
        std::reverse(path.begin(), path.end());

    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        int v = path[i];
        Rational mx = values[g.neighbors(v).front().to], mn = mx;
        for (const auto& nb : g.neighbors(v).subspan(1)) {
            if (values[nb.to] > mx) mx = values[nb.to];
            if (values[nb.to] < mn) mn = values[nb.to];
        }
        if (values[path[i - 1]] != mn || values[path[i + 1]] != mx)
            throw Error("the pruned path misses the neighborhood extremes at "
                        "\"" + g.label(v) + "\"; the value table is not the "
                        "solution of this problem");
    }
    return path;
}

}  // namespace infharm
