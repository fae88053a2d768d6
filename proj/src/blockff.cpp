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

#include "ffsim/blockff.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ffsim/error.hpp"
#include "ffsim/schur.hpp"

namespace ffsim::blockff {

using circuits::Circuit;
using circuits::Control;
using circuits::Gate;

namespace {

constexpr double kCoupled = 1e-12;
constexpr std::size_t kMaxTotalDim = 1024;
constexpr std::size_t kMaxQubits = 62;
// A phase reduced to (-pi, pi] costs at most ceil(pi) units; charging that
// bound keeps counts independent of t.
constexpr std::size_t kPhaseUnits = 4;
constexpr std::size_t kBitsPerParameter = 64;

// Connected components of the coupling graph |h_ij| > kCoupled, each sorted.
std::vector<std::vector<std::size_t>> components(const DenseOperator& h) {
    const auto d = static_cast<std::size_t>(h.rows());
    std::vector<std::size_t> parent(d);
    for (std::size_t k = 0; k < d; ++k) parent[k] = k;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a + 1; b < d; ++b) {
            const auto ia = static_cast<Eigen::Index>(a);
            const auto ib = static_cast<Eigen::Index>(b);
            if (std::abs(h(ia, ib)) > kCoupled || std::abs(h(ib, ia)) > kCoupled) {
                const std::size_t ra = find(a);
                const std::size_t rb = find(b);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<long> index_of(d, -1);
    for (std::size_t k = 0; k < d; ++k) {
        const std::size_t r = find(k);
        if (index_of[r] < 0) {
            index_of[r] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(index_of[r])].push_back(k);
    }
    return out;
}

DenseOperator program_to_matrix(const std::vector<ProgramStep>& steps, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    DenseOperator u = DenseOperator::Identity(d, d);
    for (const auto& s : steps) {
        if (s.kind == ProgramStep::Kind::Phase) {
            u.row(static_cast<Eigen::Index>(s.i)) *= std::exp(cplx(0.0, s.phase));
        } else {
            const auto i = static_cast<Eigen::Index>(s.i);
            const auto j = static_cast<Eigen::Index>(s.j);
            const Eigen::RowVectorXcd ri = u.row(i);
            const Eigen::RowVectorXcd rj = u.row(j);
            u.row(i) = s.block(0, 0) * ri + s.block(0, 1) * rj;
            u.row(j) = s.block(1, 0) * ri + s.block(1, 1) * rj;
        }
    }
    return u;
}

// Explicit two-qubit gate on one-hot slots (a, b): |10> is index a, |01> is b.
DenseOperator one_hot_pair_gate(const Eigen::Matrix2cd& block) {
    DenseOperator m = DenseOperator::Identity(4, 4);
    m(2, 2) = block(0, 0);
    m(2, 1) = block(0, 1);
    m(1, 2) = block(1, 0);
    m(1, 1) = block(1, 1);
    return m;
}

std::size_t mu_width(std::size_t blocks, Encoding enc) {
    if (enc == Encoding::Unary) return blocks;
    std::size_t w = 1;
    while ((std::size_t{1} << w) < blocks) ++w;
    return w;
}

std::vector<Control> mu_controls(std::size_t k, std::size_t blocks, Encoding enc) {
    if (enc == Encoding::Unary) return {Control{k, 1}};
    const std::size_t w = mu_width(blocks, enc);
    std::vector<Control> out;
    for (std::size_t b = 0; b < w; ++b) out.push_back(Control{b, (k >> (w - 1 - b)) & 1U});
    return out;
}

}  // namespace

std::vector<ProgramStep> block_program(const DenseOperator& h, double t) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "blockff", "block must be a nonempty square matrix");
    }
    std::vector<ProgramStep> steps;
    for (const auto& comp : components(h)) {
        if (comp.size() == 1) {
            ProgramStep s;
            s.kind = ProgramStep::Kind::Phase;
            s.i = comp[0];
            const auto k = static_cast<Eigen::Index>(comp[0]);
            s.phase = -t * h(k, k).real();
            steps.push_back(s);
            continue;
        }
        const auto m = static_cast<Eigen::Index>(comp.size());
        DenseOperator sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) {
                sub(a, b) = h(static_cast<Eigen::Index>(comp[static_cast<std::size_t>(a)]),
                              static_cast<Eigen::Index>(comp[static_cast<std::size_t>(b)]));
            }
        }
        const auto factors = numkit::two_level_decompose(numkit::evolve_exact(sub, t), {.keep_identity_factors = true});
        // U = F_0 F_1 ... F_k, so F_k acts first.
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            ProgramStep s;
            s.i = comp[it->i];
            s.j = comp[it->j];
            s.block = it->block;
            steps.push_back(s);
        }
    }
    return steps;
}

std::string classical_block_program(const BlockEvolutionSpec& spec, const std::string& label) {
    for (const auto& b : spec.blocks) {
        if (b.label != label) continue;
        std::ostringstream out;
        for (const auto& s : block_program(b.h, spec.t)) {
            nlohmann::json j;
            if (s.kind == ProgramStep::Kind::Phase) {
                j = {{"kind", "phase"}, {"index", s.i}, {"angle", s.phase}};
            } else {
                nlohmann::json m = nlohmann::json::array();
                for (int r = 0; r < 2; ++r) {
                    for (int c = 0; c < 2; ++c) m.push_back({s.block(r, c).real(), s.block(r, c).imag()});
                }
                j = {{"kind", "two_level"}, {"pair", {s.i, s.j}}, {"block", m}};
            }
            out << j.dump() << '\n';
        }
        return out.str();
    }
    throw Error(ErrorKind::UnknownLabel, "blockff", "no block labelled '" + label + "'");
}

void append_block_evolution(Circuit& c, const DenseOperator& h, double t, const BlockPlacement& where,
                            const std::string& label) {
    if (static_cast<std::size_t>(h.rows()) != where.data_slots.size()) {
        throw Error(ErrorKind::DimensionMismatch, "blockff", "placement does not match block dimension");
    }
    for (const auto& s : block_program(h, t)) {
        Gate g;
        if (s.kind == ProgramStep::Kind::Phase) {
            g = Gate::rotation(label + ":phase", {where.data_slots[s.i]}, circuits::projector_one(),
                               std::remainder(-s.phase, 2.0 * kPi));
            g.cost_units = kPhaseUnits;
        } else {
            g = Gate::unitary(label + ":two-level", {where.data_slots[s.i], where.data_slots[s.j]},
                              one_hot_pair_gate(s.block));
        }
        for (const auto& ctl : where.controls) g = circuits::controlled(g, ctl);
        c.add(std::move(g));
    }
}

Circuit build_block_unitary(const BlockEvolutionSpec& spec) {
    const std::size_t nb = spec.blocks.size();
    std::size_t total = 0;
    std::size_t widest = 0;
    std::set<std::string> seen;
    for (const auto& b : spec.blocks) {
        if (b.h.rows() < 1 || b.h.rows() != b.h.cols()) {
            throw Error(ErrorKind::DimensionMismatch, "blockff", "block '" + b.label + "' is not square");
        }
        if (!seen.insert(b.label).second) {
            throw Error(ErrorKind::EncodingOverflow, "blockff", "duplicate block label '" + b.label + "'");
        }
        total += static_cast<std::size_t>(b.h.rows());
        widest = std::max(widest, static_cast<std::size_t>(b.h.rows()));
    }
    if (total > kMaxTotalDim) {
        throw Error(ErrorKind::BlockTooLarge, "blockff", "sum of block dimensions exceeds 2^10");
    }
    const std::size_t mw = nb == 0 ? 0 : mu_width(nb, spec.encoding);
    if (mw + widest > kMaxQubits) {
        throw Error(ErrorKind::EncodingOverflow, "blockff", "mu register and data register exceed 62 qubits");
    }
    Circuit c(std::vector<std::size_t>(mw + widest, 2));
    for (std::size_t k = 0; k < nb; ++k) {
        BlockPlacement where;
        where.controls = mu_controls(k, nb, spec.encoding);
        for (std::size_t a = 0; a < static_cast<std::size_t>(spec.blocks[k].h.rows()); ++a) where.data_slots.push_back(mw + a);
        append_block_evolution(c, spec.blocks[k].h, spec.t, where, spec.blocks[k].label);
    }
    return c;
}

PermFFResult fast_forward_permutation_invariant(const DenseOperator& h, std::size_t n, double t, double eps,
                                                std::uint64_t seed, std::size_t num_states) {
    const auto extraction = schur::extract_blocks(h, n);
    const schur::UnaryRegisterLayout lay(n);

    Circuit v(lay.register_dims());
    const Circuit u = schur::build_schur_transform(n);
    v.append(u);
    PermFFReport report;
    std::size_t parameters = 0;
    for (const auto& b : extraction.blocks) {
        BlockPlacement where;
        where.controls = {Control{lay.j_slot(b.twoJ), 1}};
        for (int twoq = -b.twoJ; twoq <= b.twoJ; twoq += 2) where.data_slots.push_back(lay.q_slot(twoq));
        const std::string label = "U_J(2J=" + std::to_string(b.twoJ) + ")";
        append_block_evolution(v, b.block, t, where, label);

        const auto steps = block_program(b.block, t);
        for (const auto& s : steps) parameters += s.kind == ProgramStep::Kind::Phase ? 1 : 8;
        const auto dim = static_cast<std::size_t>(b.block.rows());
        report.max_block_error = std::max(
            report.max_block_error,
            numkit::spectral_norm(program_to_matrix(steps, dim) - numkit::evolve_exact(b.block, t)));
    }
    v.append(u.inverse());

    const DenseOperator exact = numkit::evolve_exact(h, t);
    numkit::Rng rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < num_states; ++k) {
        const StateVector psi = numkit::random_state(static_cast<std::size_t>(h.rows()), rng);
        circuits::SparseState st;
        for (Eigen::Index x = 0; x < psi.size(); ++x) st.amplitudes[static_cast<std::uint64_t>(x)] = psi(x);
        circuits::apply_sparse(v, st);
        const StateVector want = exact * psi;
        double err2 = 0.0;
        for (const auto& [idx, amp] : st.amplitudes) {
            if (idx < static_cast<std::uint64_t>(want.size())) {
                err2 += std::norm(amp - want(static_cast<Eigen::Index>(idx)));
            } else {
                err2 += std::norm(amp);
            }
        }
        for (Eigen::Index x = 0; x < want.size(); ++x) {
            if (!st.amplitudes.count(static_cast<std::uint64_t>(x))) err2 += std::norm(want(x));
        }
        worst = std::max(worst, std::sqrt(err2));
    }

    report.n = n;
    report.t = t;
    report.epsilon = eps;
    report.counts = circuits::count(v);
    report.ancilla_width = lay.j_width() + lay.q_width();
    report.modeled_ancillas = parameters * kBitsPerParameter;
    report.max_error_measured = worst;
    report.states_checked = num_states;
    if (worst > eps) {
        throw Error(ErrorKind::ToleranceUnachievable, "blockff",
                    "measured error " + std::to_string(worst) + " exceeds epsilon " + std::to_string(eps));
    }
    return {std::move(v), report};
}

}  // namespace ffsim::blockff
