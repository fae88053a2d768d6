// Copyright 2026 The ffsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ffsim/schur.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "ffsim/error.hpp"

namespace ffsim::schur {

using circuits::Circuit;
using circuits::Control;
using circuits::Gate;

namespace {

constexpr std::size_t kMaxN = 8;
constexpr double kLeakTol = 1e-12;
constexpr double kInvarianceTol = 1e-8;

std::uint64_t binom(std::size_t n, long k) {
    if (k < 0 || static_cast<std::size_t>(k) > n) return 0;
    std::uint64_t r = 1;
    for (long j = 1; j <= k; ++j) r = r * (n - static_cast<std::size_t>(k) + static_cast<std::size_t>(j)) / static_cast<std::uint64_t>(j);
    return r;
}

std::vector<Gate> with_control(std::vector<Gate> gates, Control c, const std::string& label) {
    for (auto& g : gates) {
        g = circuits::controlled(g, c);
        g.label = label;
    }
    return gates;
}

std::vector<Gate> inverse_of(const std::vector<Gate>& gates, const std::string& label) {
    std::vector<Gate> out;
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.push_back(it->inverse());
        out.back().label = label;
    }
    return out;
}

void add_all(Circuit& c, const std::vector<Gate>& gates) {
    for (const auto& g : gates) c.add(g);
}

std::vector<std::size_t> j_slots(const UnaryRegisterLayout& lay) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < lay.j_width(); ++k) s.push_back(lay.j_slot(static_cast<int>(k)));
    return s;
}

std::vector<std::size_t> q_slots(const UnaryRegisterLayout& lay) {
    std::vector<std::size_t> s;
    const int n = static_cast<int>(lay.n);
    for (int twoq = -n; twoq <= n; ++twoq) s.push_back(lay.q_slot(twoq));
    return s;
}

void check_n(std::size_t n) {
    if (n < 1 || n > kMaxN) {
        throw Error(ErrorKind::OutOfRange, "schur", "n must lie in 1..8, got " + std::to_string(n));
    }
}

// Applies the single-qubit operator `op` to every qubit and sums.
DenseOperator collective(std::size_t n, const DenseOperator& op) {
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    DenseOperator out = DenseOperator::Zero(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - k);
        for (Eigen::Index col = 0; col < dim; ++col) {
            const auto c = static_cast<std::uint64_t>(col);
            const int b = (c & bit) ? 1 : 0;
            for (int a = 0; a < 2; ++a) {
                const cplx v = op(a, b);
                if (v == cplx(0.0)) continue;
                const std::uint64_t row = a ? (c | bit) : (c & ~bit);
                out(static_cast<Eigen::Index>(row), col) += v;
            }
        }
    }
    return out;
}

}  // namespace

double cg_angle(int twoJ, int twoq_prime) {
    if (twoJ < 0 || std::abs(twoq_prime) > twoJ + 1 || ((twoq_prime - twoJ - 1) % 2) != 0) {
        throw Error(ErrorKind::InvalidQuantumNumbers, "schur",
                    "need |q'| <= J + 1/2 and q' = J + 1/2 mod 1 (2J=" + std::to_string(twoJ) +
                        ", 2q'=" + std::to_string(twoq_prime) + ")");
    }
    const double x = static_cast<double>(twoq_prime) / (2.0 * (twoJ + 1));
    const double c = std::sqrt(std::max(0.0, 0.5 + x));
    const double s = std::sqrt(std::max(0.0, 0.5 - x));
    return std::atan2(s, c);
}

std::vector<Gate> unary_increment_gate(const std::vector<std::size_t>& slots) {
    std::vector<Gate> gates;
    if (slots.size() < 2) return gates;
    // Descending swap order moves slot k to k+1 and wraps the last slot to 0.
    for (std::size_t k = slots.size() - 1; k-- > 0;) {
        gates.push_back(Gate::unitary("swap", {slots[k], slots[k + 1]}, circuits::swap_matrix()));
    }
    return gates;
}

std::size_t cg_rotation_count(std::size_t n, std::size_t i) {
    check_n(n);
    std::size_t total = 0;
    for (int twoJ = static_cast<int>(i) - 1; twoJ >= 0; twoJ -= 2) total += static_cast<std::size_t>(twoJ) + 2;
    return total;
}

Circuit build_cg_unitary(std::size_t n, std::size_t i) {
    check_n(n);
    if (i < 1 || i > n) throw Error(ErrorKind::OutOfRange, "schur", "CG step must lie in 1..n");
    const UnaryRegisterLayout lay(n);
    Circuit c(lay.register_dims());
    const std::size_t x = lay.system(i - 1);
    const Control on_x{x, 1};

    const auto q_inc = unary_increment_gate(q_slots(lay));
    add_all(c, inverse_of(q_inc, "qX^-1"));
    add_all(c, with_control(q_inc, on_x, "qX^2"));
    add_all(c, with_control(q_inc, on_x, "qX^2"));

    // Rotations on the valid (J, q') pairs of the i-1 coupled spins.
    for (int twoJ = static_cast<int>(i) - 1; twoJ >= 0; twoJ -= 2) {
        for (int twoqp = -(twoJ + 1); twoqp <= twoJ + 1; twoqp += 2) {
            Gate g = Gate::rotation("CG-Ry", {x}, circuits::pauli_y(), cg_angle(twoJ, twoqp));
            g = circuits::controlled(g, Control{lay.j_slot(twoJ), 1});
            g = circuits::controlled(g, Control{lay.q_slot(twoqp), 1});
            c.add(std::move(g));
        }
    }

    const auto j_inc = unary_increment_gate(j_slots(lay));
    add_all(c, inverse_of(j_inc, "JX^-1"));
    add_all(c, with_control(j_inc, on_x, "JX^2"));
    add_all(c, with_control(j_inc, on_x, "JX^2"));
    return c;
}

Circuit build_schur_transform(std::size_t n) {
    check_n(n);
    const UnaryRegisterLayout lay(n);
    Circuit c(lay.register_dims());
    c.add(Gate::unitary("prep", {lay.j_slot(0)}, circuits::pauli_x()));
    c.add(Gate::unitary("prep", {lay.q_slot(0)}, circuits::pauli_x()));
    for (std::size_t i = 1; i <= n; ++i) c.append(build_cg_unitary(n, i));
    return c;
}

std::size_t multiplicity(std::size_t n, int twoJ) {
    if (twoJ < 0 || static_cast<std::size_t>(twoJ) > n || (n - static_cast<std::size_t>(twoJ)) % 2 != 0) return 0;
    const long k = static_cast<long>((n - static_cast<std::size_t>(twoJ)) / 2);
    return static_cast<std::size_t>(binom(n, k) - binom(n, k - 1));
}

std::vector<SchurLabel> schur_labels(std::size_t n) {
    check_n(n);
    std::vector<SchurLabel> labels;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<int> path(n);
        int twoJ = 0;
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            path[k] = static_cast<int>((bits >> (n - 1 - k)) & 1U);
            twoJ += path[k] ? 1 : -1;
            ok = twoJ >= 0;
        }
        if (!ok) continue;
        for (int twoq = -twoJ; twoq <= twoJ; twoq += 2) labels.push_back({twoJ, path, twoq});
    }
    std::stable_sort(labels.begin(), labels.end(), [](const SchurLabel& a, const SchurLabel& b) {
        if (a.twoJ != b.twoJ) return a.twoJ < b.twoJ;
        if (a.path != b.path) return a.path < b.path;
        return a.twoq < b.twoq;
    });
    return labels;
}

std::uint64_t label_index(std::size_t n, const SchurLabel& label) {
    const UnaryRegisterLayout lay(n);
    const std::size_t nq = lay.num_qubits();
    auto bit = [&](std::size_t qubit) { return std::uint64_t{1} << (nq - 1 - qubit); };
    std::uint64_t idx = bit(lay.j_slot(label.twoJ)) | bit(lay.q_slot(label.twoq));
    for (std::size_t k = 0; k < n; ++k) {
        if (label.path[k]) idx |= bit(lay.system(k));
    }
    return idx;
}

const DenseOperator& schur_matrix(std::size_t n) {
    check_n(n);
    static std::mutex mu;
    static std::map<std::size_t, DenseOperator> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    const Circuit c = build_schur_transform(n);
    const auto labels = schur_labels(n);
    std::unordered_map<std::uint64_t, Eigen::Index> row_of;
    for (std::size_t r = 0; r < labels.size(); ++r) row_of[label_index(n, labels[r])] = static_cast<Eigen::Index>(r);

    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    DenseOperator s = DenseOperator::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        circuits::SparseState st;
        st.amplitudes[static_cast<std::uint64_t>(x)] = 1.0;  // system qubits are least significant
        circuits::apply_sparse(c, st);
        for (const auto& [idx, amp] : st.amplitudes) {
            auto it = row_of.find(idx);
            if (it == row_of.end()) {
                if (std::abs(amp) > kLeakTol) {
                    throw Error(ErrorKind::NotUnitary, "schur", "amplitude left the valid label space");
                }
                continue;
            }
            s(it->second, x) = amp;
        }
    }
    return cache.emplace(n, std::move(s)).first->second;
}

CollectiveOps collective_ops(std::size_t n) {
    if (n < 1 || n > 12) throw Error(ErrorKind::OutOfRange, "schur", "collective operators need 1 <= n <= 12");
    return {0.5 * collective(n, circuits::pauli_x()), 0.5 * collective(n, circuits::pauli_y()),
            0.5 * collective(n, circuits::pauli_z())};
}

DenseOperator build_lmg(std::size_t n, double v, double w) {
    if (std::abs(v) > 1.0 || std::abs(w) > 1.0) {
        throw Error(ErrorKind::OutOfRange, "schur", "LMG couplings need |V|, |W| <= 1");
    }
    const auto ops = collective_ops(n);
    const DenseOperator jp = (ops.jx + cplx(0.0, 1.0) * ops.jy) / std::sqrt(2.0);
    const DenseOperator jm = jp.adjoint();
    const double nn = static_cast<double>(n);
    DenseOperator h = ops.jz + (v / nn) * (jp * jp + jm * jm) + (w / nn) * (jp * jm + jm * jp);
    return 0.5 * (h + h.adjoint());
}

DenseOperator random_permutation_invariant(std::size_t n, numkit::Rng& rng) {
    const auto ops = collective_ops(n);
    const DenseOperator* basis[3] = {&ops.jx, &ops.jy, &ops.jz};
    const auto dim = ops.jz.rows();
    DenseOperator p = DenseOperator::Zero(dim, dim);
    for (int a = 0; a < 3; ++a) {
        p += rng.uniform(-1.0, 1.0) * *basis[a];
        for (int b = 0; b < 3; ++b) {
            const DenseOperator ab = *basis[a] * *basis[b];
            p += rng.uniform(-1.0, 1.0) * ab;
            for (int c = 0; c < 3; ++c) p += rng.uniform(-1.0, 1.0) * (ab * *basis[c]);
        }
    }
    DenseOperator h = 0.5 * (p + p.adjoint());
    const double norm = numkit::spectral_norm(h);
    if (norm > 0.0) h /= norm;
    return h;
}

double permutation_defect(const DenseOperator& h, std::size_t n) {
    const auto dim = static_cast<std::uint64_t>(h.rows());
    if (dim != (std::uint64_t{1} << n) || h.cols() != h.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "schur", "operator does not act on n qubits");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::uint64_t b1 = std::uint64_t{1} << (n - 1 - k);
        const std::uint64_t b2 = b1 >> 1;
        auto perm = [&](std::uint64_t x) {
            const bool x1 = x & b1;
            const bool x2 = x & b2;
            if (x1 == x2) return x;
            return x ^ b1 ^ b2;
        };
        double s = 0.0;
        for (std::uint64_t a = 0; a < dim; ++a) {
            for (std::uint64_t b = 0; b < dim; ++b) {
                s += std::norm(h(static_cast<Eigen::Index>(perm(a)), static_cast<Eigen::Index>(perm(b))) -
                               h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
            }
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

BlockExtraction extract_blocks(const DenseOperator& h, std::size_t n) {
    check_n(n);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double defect = permutation_defect(h, n);
    if (defect > kInvarianceTol * scale) {
        throw Error(ErrorKind::NotPermutationInvariant, "schur",
                    "commutator with a transposition has norm " + std::to_string(defect));
    }
    const DenseOperator& s = schur_matrix(n);
    const DenseOperator hs = s * h * s.adjoint();
    const auto labels = schur_labels(n);

    // Group rows by (J, path); labels are sorted so groups are contiguous.
    struct Group {
        int twoJ;
        Eigen::Index start;
        Eigen::Index size;
    };
    std::vector<Group> groups;
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (groups.empty() || labels[r].twoJ != labels[groups.back().start].twoJ ||
            labels[r].path != labels[groups.back().start].path) {
            groups.push_back({labels[r].twoJ, static_cast<Eigen::Index>(r), 0});
        }
        groups.back().size += 1;
    }

    std::vector<std::size_t> group_of(labels.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (Eigen::Index k = 0; k < groups[g].size; ++k) group_of[static_cast<std::size_t>(groups[g].start + k)] = g;
    }
    double outside = 0.0;
    for (Eigen::Index a = 0; a < hs.rows(); ++a) {
        for (Eigen::Index b = 0; b < hs.cols(); ++b) {
            if (group_of[static_cast<std::size_t>(a)] != group_of[static_cast<std::size_t>(b)]) outside += std::norm(hs(a, b));
        }
    }

    BlockExtraction out;
    std::map<int, DenseOperator> first;
    std::map<int, std::size_t> copies;
    for (const auto& g : groups) {
        const DenseOperator b = hs.block(g.start, g.start, g.size, g.size);
        auto it = first.find(g.twoJ);
        if (it == first.end()) {
            first.emplace(g.twoJ, b);
        } else {
            out.path_spread = std::max(out.path_spread, (b - it->second).cwiseAbs().maxCoeff());
        }
        copies[g.twoJ] += 1;
    }
    out.off_block_norm = std::sqrt(outside);
    for (const auto& [twoJ, b] : first) out.blocks.push_back({twoJ, copies[twoJ], b});
    return out;
}

}  // namespace ffsim::schur
