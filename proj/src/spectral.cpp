#include "localflow/spectral.hpp"

#include "localflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace localflow {

WalkData walk_data(const Matrix& weights) {
    const Eigen::Index n = weights.rows();
    if (weights.cols() != n || n == 0) throw InvalidInput("weight matrix must be square and nonempty");
    WalkData w;
    w.degrees = weights.rowwise().sum();
    if ((w.degrees.array() <= 0.0).any()) throw InvalidInput("every vertex needs positive weighted degree");
    w.transition = w.degrees.cwiseInverse().asDiagonal() * weights;
    w.stationary = w.degrees / w.degrees.sum();

    const Vector inv_sqrt = w.degrees.cwiseSqrt().cwiseInverse();
    const Matrix gamma = inv_sqrt.asDiagonal() * weights * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (gamma + gamma.transpose()));
    w.eigenvalues = eig.eigenvalues().reverse();
    w.eigenvectors = eig.eigenvectors().rowwise().reverse();
    w.lambda = second_largest_magnitude(w.eigenvalues);
    return w;
}

WalkData walk_data(const SensitivityOperator& s) { return walk_data(s.weights); }

SeriesValue green_series(const WalkData& walk, Vertex u, Vertex v, const Vector& g, double tail_tol) {
    if (!walk.contractive()) throw NonContractiveWalk(walk.lambda);
    const Eigen::Index n = walk.transition.rows();
    if (g.size() != n) throw InvalidInput("series weight vector has wrong size");
    SeriesValue out;
    if (u == v) return out;

    // |(e_u - e_v)^T P^t g| <= lambda^t sqrt(1/d_u + 1/d_v) ||Deg^{1/2} g||
    const double amplitude = std::sqrt((1.0 / walk.degrees(u) + 1.0 / walk.degrees(v)) *
                                       g.cwiseAbs2().dot(walk.degrees));
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    row(u) = 1.0;
    row(v) = -1.0;
    double lambda_pow = 1.0;  // lambda^t
    for (int t = 0;; ++t) {
        out.value += row.dot(g);
        out.terms = t + 1;
        lambda_pow *= walk.lambda;
        out.tail_bound = amplitude * lambda_pow / (1.0 - walk.lambda);
        if (out.tail_bound <= tail_tol) break;
        if (t > 10'000'000) throw NumericalFailure("green series did not reach its tail tolerance");
        row = row * walk.transition;
    }
    return out;
}

GreenDifference green_difference(const SensitivityOperator& s, const WalkData& walk, Vertex u, Vertex v, Vertex w,
                                 Vertex z, double tail_tol) {
    const Matrix& pinv = s.laplacian_pinv;
    GreenDifference out;
    out.via_pinv = pinv(u, w) - pinv(u, z) - pinv(v, w) + pinv(v, z);
    if (!walk.contractive()) {
        out.via_series = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    Vector g = Vector::Zero(walk.degrees.size());
    g(w) += 1.0 / walk.degrees(w);
    g(z) -= 1.0 / walk.degrees(z);
    const SeriesValue series = green_series(walk, u, v, g, tail_tol);
    out.via_series = series.value;
    out.series_available = true;
    out.terms = series.terms;
    out.tail_bound = series.tail_bound;
    return out;
}

// ---------------------------------------------------------------------------

int KilledWalkData::row(Vertex v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) throw InvalidInput("vertex is the absorbing vertex or out of range");
    return static_cast<int>(it - vertices.begin());
}

KilledWalkData killed_walk(const Matrix& weights, Vertex z_bar) {
    const Eigen::Index n = weights.rows();
    if (z_bar < 0 || z_bar >= n) throw InvalidInput("absorbing vertex out of range");
    if (n < 2) throw InvalidInput("killed walk needs at least two vertices");
    KilledWalkData k;
    k.z_bar = z_bar;
    for (Vertex v = 0; v < n; ++v)
        if (v != z_bar) k.vertices.push_back(v);

    const Vector degrees = weights.rowwise().sum();
    const Matrix w_bar = submatrix(weights, k.vertices, k.vertices);
    k.restricted_degrees = gather(degrees, k.vertices);
    k.restricted_laplacian = -w_bar;
    k.restricted_laplacian.diagonal() += k.restricted_degrees;
    k.restricted_transition = k.restricted_degrees.cwiseInverse().asDiagonal() * w_bar;

    Eigen::LLT<Matrix> llt(k.restricted_laplacian);
    if (llt.info() != Eigen::Success) throw NumericalFailure("restricted Laplacian is not positive definite");
    const auto m = static_cast<Eigen::Index>(k.vertices.size());
    k.green = llt.solve(Matrix::Identity(m, m));
    if ((k.green * k.restricted_laplacian - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
        throw NumericalFailure("restricted Laplacian inverse is inaccurate");
    return k;
}

KilledWalkData killed_walk(const SensitivityOperator& s, Vertex z_bar) { return killed_walk(s.weights, z_bar); }

Matrix killed_green_neumann(const KilledWalkData& k) {
    const Eigen::Index m = k.restricted_transition.rows();
    const Matrix fundamental = (Matrix::Identity(m, m) - k.restricted_transition).partialPivLu().inverse();
    return fundamental * k.restricted_degrees.cwiseInverse().asDiagonal();
}

double hitting_probability(const KilledWalkData& k, Vertex v, Vertex w) {
    const int i = k.row(v);
    const int j = k.row(w);
    return k.green(i, j) / k.green(j, j);
}

double expected_visits(const KilledWalkData& k, Vertex v, Vertex w) {
    const int j = k.row(w);
    return k.restricted_degrees(j) * k.green(k.row(v), j);
}

Matrix pinv_via_restricted(const Matrix& laplacian_pinv, Vertex z_bar) {
    const Eigen::Index n = laplacian_pinv.rows();
    if (z_bar < 0 || z_bar >= n) throw InvalidInput("absorbing vertex out of range");
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (v != z_bar) rest.push_back(v);
    Matrix out(n - 1, n - 1);
    for (std::size_t i = 0; i < rest.size(); ++i) {
        for (std::size_t j = 0; j < rest.size(); ++j) {
            const int v = rest[i];
            const int w = rest[j];
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                laplacian_pinv(v, w) - laplacian_pinv(v, z_bar) - laplacian_pinv(z_bar, w) +
                laplacian_pinv(z_bar, z_bar);
        }
    }
    return out;
}

Matrix pinv_via_restricted(const SensitivityOperator& s, Vertex z_bar) {
    return pinv_via_restricted(s.laplacian_pinv, z_bar);
}

KilledWalkEstimate simulate_killed_walk(const WalkData& walk, Vertex z_bar, Vertex start, Vertex target, long walks,
                                        std::uint64_t seed) {
    const Eigen::Index n = walk.transition.rows();
    if (z_bar < 0 || z_bar >= n || start < 0 || start >= n || target < 0 || target >= n)
        throw InvalidInput("vertex out of range");
    if (start == z_bar || target == z_bar) throw InvalidInput("start and target must differ from the absorbing vertex");
    if (walks <= 1) throw InvalidInput("need at least two walks");

    // Sparse rows of P with cumulative probabilities.
    std::vector<std::vector<std::pair<double, Vertex>>> rows(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (walk.transition(i, j) > 0.0) {
                acc += walk.transition(i, j);
                rows[static_cast<std::size_t>(i)].emplace_back(acc, static_cast<Vertex>(j));
            }
        }
    }

    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto next = [&](Vertex v) {
        const auto& row = rows[static_cast<std::size_t>(v)];
        const double r = uniform() * row.back().first;
        for (const auto& [cum, w] : row)
            if (r < cum) return w;
        return row.back().second;
    };

    double hits = 0.0;
    double visit_sum = 0.0;
    double visit_sq = 0.0;
    for (long i = 0; i < walks; ++i) {
        Vertex x = start;
        bool hit = false;
        double visits = 0.0;
        while (x != z_bar) {
            if (x == target) {
                hit = true;
                visits += 1.0;
            }
            x = next(x);
        }
        hits += hit ? 1.0 : 0.0;
        visit_sum += visits;
        visit_sq += visits * visits;
    }
    KilledWalkEstimate est;
    const double count = static_cast<double>(walks);
    est.walks = walks;
    est.hit_probability = hits / count;
    est.hit_stderr = std::sqrt(est.hit_probability * (1.0 - est.hit_probability) / count);
    est.mean_visits = visit_sum / count;
    const double variance = (visit_sq - count * est.mean_visits * est.mean_visits) / (count - 1.0);
    est.visits_stderr = std::sqrt(std::max(variance, 0.0) / count);
    return est;
}

// ---------------------------------------------------------------------------

namespace {

int neighbours_inside(const DirectedGraph& g, Vertex v, const std::vector<bool>& inside) {
    int count = 0;
    for (Vertex w : g.neighbors(v))
        if (inside[static_cast<std::size_t>(w)]) ++count;
    return count;
}

std::vector<bool> membership(int n, std::span<const Vertex> set) {
    std::vector<bool> mask(static_cast<std::size_t>(n), false);
    for (Vertex v : set) {
        if (v < 0 || v >= n) throw InvalidInput("vertex out of range");
        mask[static_cast<std::size_t>(v)] = true;
    }
    return mask;
}

}  // namespace

SpectralSumBound walk_sum_bound(const WalkData& walk, const DirectedGraph& g, std::span<const Vertex> u_set,
                                std::span<const Vertex> z_set, const Vector& f) {
    if (!walk.contractive()) throw NonContractiveWalk(walk.lambda);
    const Eigen::Index n = walk.degrees.size();
    if (f.size() != n) throw InvalidInput("f must have one entry per vertex");
    const auto in_u = membership(g.num_vertices(), u_set);
    const auto in_z = membership(g.num_vertices(), z_set);
    for (Eigen::Index v = 0; v < n; ++v)
        if (!in_z[static_cast<std::size_t>(v)] && f(v) != 0.0) throw InvalidInput("f must vanish outside Z");

    // h_u = sum_{k>=2} psi_ku / sqrt(d_u) * <psi_k, Deg^{1/2} f> / (1 - lambda_k)
    const Vector coeffs = walk.eigenvectors.transpose() * (walk.degrees.cwiseSqrt().cwiseProduct(f));
    Vector scaled = Vector::Zero(n);
    for (Eigen::Index k = 1; k < n; ++k) scaled(k) = coeffs(k) / (1.0 - walk.eigenvalues(k));
    const Vector h = (walk.eigenvectors * scaled).cwiseQuotient(walk.degrees.cwiseSqrt());

    double sum_sq = 0.0;
    for (const Arc& a : g.edges()) {
        if (in_u[static_cast<std::size_t>(a.tail)] && in_u[static_cast<std::size_t>(a.head)]) {
            const double diff = h(a.tail) - h(a.head);
            sum_sq += diff * diff;
        }
    }

    double max_nb = 0.0;
    double min_sqrt_deg = std::numeric_limits<double>::infinity();
    for (Vertex u : u_set) {
        max_nb = std::max(max_nb, std::sqrt(2.0 * neighbours_inside(g, u, in_u)));
        min_sqrt_deg = std::min(min_sqrt_deg, std::sqrt(walk.degrees(u)));
    }
    SpectralSumBound out;
    out.distance = set_distance(g, u_set, z_set);
    out.lhs = std::sqrt(sum_sq);
    out.rhs = max_nb / min_sqrt_deg * std::pow(walk.lambda, out.distance) / (1.0 - walk.lambda) *
              std::sqrt(f.cwiseAbs2().dot(walk.degrees));
    return out;
}

DecayBound decay_bound(const SensitivityOperator& s, const WalkData& walk, double mu, const Subgraph& sub,
                       std::span<const Vertex> z_set, double p_norm_on_z, double cost_alpha, double cost_beta) {
    if (!walk.contractive()) throw NonContractiveWalk(walk.lambda);
    const DirectedGraph& g = sub.parent();
    const auto u_set = sub.vertices();
    const std::vector<bool> in_u = membership(g.num_vertices(), u_set);

    double max_nb = 0.0;
    double min_degree_b = std::numeric_limits<double>::infinity();
    int min_degree_graph = std::numeric_limits<int>::max();
    double max_weight = 0.0;
    for (Vertex u : u_set) {
        max_nb = std::max(max_nb, std::sqrt(2.0 * neighbours_inside(g, u, in_u)));
        min_degree_b = std::min(min_degree_b, walk.degrees(u));
        min_degree_graph = std::min(min_degree_graph, g.degree(u));
        for (Vertex w : g.neighbors(u))
            if (in_u[static_cast<std::size_t>(w)]) max_weight = std::max(max_weight, s.weights(u, w));
    }

    DecayBound out;
    out.distance = set_distance(g, u_set, z_set);
    out.lambda = walk.lambda;
    out.c_at_b = max_nb / min_degree_b * max_weight;
    out.at_b = out.c_at_b * std::pow(out.lambda, out.distance) / (1.0 - out.lambda) * p_norm_on_z;

    // Weights live in [1/beta, 1/alpha] for every b.
    const double w_minus = 1.0 / cost_beta;
    const double w_plus = 1.0 / cost_alpha;
    out.rho = interlacing_bound(g.min_degree(), g.max_degree(), w_minus, w_plus, mu);
    out.c_conservative = max_nb / (min_degree_graph * w_minus) * w_plus;
    out.conservative_valid = out.rho < 1.0;
    out.conservative = out.conservative_valid
                           ? out.c_conservative * std::pow(out.rho, out.distance) / (1.0 - out.rho) * p_norm_on_z
                           : std::numeric_limits<double>::infinity();
    return out;
}

DecayBound decay_bound(const FlowProblem& problem, const SensitivityOperator& s, const Subgraph& sub,
                       std::span<const Vertex> z_set, double p_norm_on_z) {
    return decay_bound(s, walk_data(s), adjacency_spectrum(problem.graph()).mu, sub, z_set, p_norm_on_z,
                       problem.alpha(), problem.beta());
}

double interlacing_bound(int k_minus, int k_plus, double w_minus, double w_plus, double mu) {
    if (!(k_minus > 0 && k_minus <= k_plus)) throw InvalidInput("interlacing needs 0 < k- <= k+");
    if (!(w_minus > 0.0 && w_minus <= w_plus)) throw InvalidInput("interlacing needs 0 < w- <= w+");
    const double km = k_minus;
    return w_plus * k_plus / (w_minus * km) - 1.0 + w_plus / (w_minus * km) * mu;
}

InterlacingInterval interlacing_interval(const Vector& adjacency_descending, int m, int k_minus, int k_plus,
                                         double w_minus, double w_plus) {
    const auto n = static_cast<int>(adjacency_descending.size());
    if (m < 1 || m > n) throw InvalidInput("subgraph size must lie in [1, n]");
    interlacing_bound(k_minus, k_plus, w_minus, w_plus, 0.0);  // validates the constants
    const double km = k_minus;
    const double kp = k_plus;
    InterlacingInterval out{Vector(m), Vector(m)};
    for (int i = 0; i < m; ++i) {
        // 0-based i corresponds to eigenvalue index i+1; mu_{i+n-m} is entry i+n-m.
        out.lower(i) = 1.0 - w_plus * kp / (w_minus * km) + w_plus / (w_minus * km) * adjacency_descending(i + n - m);
        out.upper(i) = 1.0 - w_minus * km / (w_plus * kp) + w_minus / (w_plus * kp) * adjacency_descending(i);
    }
    return out;
}

Vector subgraph_walk_spectrum(const Matrix& weights, const Subgraph& sub, SubgraphWalk mode) {
    const auto vertices = sub.vertices();
    const auto m = static_cast<Eigen::Index>(vertices.size());
    const DirectedGraph& g = sub.parent();
    Matrix w_sub = Matrix::Zero(m, m);
    for (EdgeIndex e : sub.edges()) {
        const Arc& a = g.edge(e);
        const int i = sub.local_vertex(a.tail);
        const int j = sub.local_vertex(a.head);
        w_sub(i, j) = weights(a.tail, a.head);
        w_sub(j, i) = weights(a.head, a.tail);
    }
    Vector deg(m);
    for (Eigen::Index i = 0; i < m; ++i)
        deg(i) = mode == SubgraphWalk::kKilled ? weights.row(vertices[static_cast<std::size_t>(i)]).sum()
                                               : w_sub.row(i).sum();
    if ((deg.array() <= 0.0).any()) throw InvalidInput("subgraph walk has a vertex of zero degree");
    const Vector inv_sqrt = deg.cwiseSqrt().cwiseInverse();
    const Matrix gamma = inv_sqrt.asDiagonal() * w_sub * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (gamma + gamma.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().reverse();
}

}  // namespace localflow
