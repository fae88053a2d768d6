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

#include "ffsim/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ffsim/error.hpp"

namespace ffsim::circuits {

namespace {

constexpr double kExplicitUnitaryTol = 1e-10;
constexpr double kSparseDrop = 1e-15;
constexpr std::uint64_t kMaxDenseDim = std::uint64_t{1} << 14;

struct GateLayout {
    std::vector<std::uint64_t> strides;  // per subsystem
    std::vector<std::uint64_t> offsets;  // per local basis index of the targets
    std::vector<std::pair<std::uint64_t, std::size_t>> target_digits;  // (stride, dim)
    std::vector<std::pair<std::uint64_t, std::pair<std::size_t, std::size_t>>> control_digits;
};

std::vector<std::uint64_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::uint64_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
    return strides;
}

GateLayout layout_of(const std::vector<std::size_t>& dims, const Gate& g) {
    GateLayout lay;
    lay.strides = strides_of(dims);
    std::size_t local = 1;
    for (auto t : g.targets) local *= dims[t];
    lay.offsets.assign(local, 0);
    // Targets are ordered: the first target is the most significant local digit.
    for (std::size_t li = 0; li < local; ++li) {
        std::size_t rem = li;
        std::uint64_t off = 0;
        for (std::size_t k = g.targets.size(); k-- > 0;) {
            const std::size_t d = dims[g.targets[k]];
            off += (rem % d) * lay.strides[g.targets[k]];
            rem /= d;
        }
        lay.offsets[li] = off;
    }
    for (auto t : g.targets) lay.target_digits.emplace_back(lay.strides[t], dims[t]);
    for (const auto& c : g.controls) {
        lay.control_digits.push_back({lay.strides[c.subsystem], {dims[c.subsystem], c.value}});
    }
    return lay;
}

bool is_base(const GateLayout& lay, std::uint64_t idx) {
    for (const auto& [stride, dim] : lay.target_digits) {
        if ((idx / stride) % dim != 0) return false;
    }
    return true;
}

bool controls_hold(const GateLayout& lay, std::uint64_t idx) {
    for (const auto& [stride, dv] : lay.control_digits) {
        if ((idx / stride) % dv.first != dv.second) return false;
    }
    return true;
}

// rows <- U_gate * rows, for every column of `m`.
void apply_gate_rows(const std::vector<std::size_t>& dims, const Gate& g, DenseOperator& m) {
    const GateLayout lay = layout_of(dims, g);
    const DenseOperator u = g.local_unitary();
    const auto local = static_cast<Eigen::Index>(lay.offsets.size());
    DenseOperator gathered(local, m.cols());
    const auto n = static_cast<std::uint64_t>(m.rows());
    for (std::uint64_t base = 0; base < n; ++base) {
        if (!is_base(lay, base) || !controls_hold(lay, base)) continue;
        for (Eigen::Index li = 0; li < local; ++li) gathered.row(li) = m.row(static_cast<Eigen::Index>(base + lay.offsets[li]));
        const DenseOperator out = u * gathered;
        for (Eigen::Index li = 0; li < local; ++li) m.row(static_cast<Eigen::Index>(base + lay.offsets[li])) = out.row(li);
    }
}

void check_model_is_qubit(const Circuit& c) {
    if (c.cost_model() != CostModel::QubitTwoLocal) {
        throw Error(ErrorKind::InvalidGate, "circuits",
                    std::string("gates of model ") + std::string(to_string(c.cost_model())) +
                        " act in a mode representation; use the lieff Fock/sector mapping");
    }
}

}  // namespace

std::string_view to_string(CostModel model) {
    switch (model) {
        case CostModel::QubitTwoLocal: return "QubitTwoLocal";
        case CostModel::FermionicWeight2: return "FermionicWeight2";
        case CostModel::BosonicWeight2: return "BosonicWeight2";
    }
    return "Unknown";
}

CostModel cost_model_from_string(std::string_view name) {
    if (name == "QubitTwoLocal") return CostModel::QubitTwoLocal;
    if (name == "FermionicWeight2") return CostModel::FermionicWeight2;
    if (name == "BosonicWeight2") return CostModel::BosonicWeight2;
    throw Error(ErrorKind::ParseError, "circuits", "unknown cost model '" + std::string(name) + "'");
}

DenseOperator Gate::local_unitary() const {
    if (matrix) return *matrix;
    if (angle == 0.0) return DenseOperator::Identity(generator.rows(), generator.cols());
    return numkit::evolve_exact(generator, angle);
}

Gate Gate::inverse() const {
    Gate g = *this;
    if (matrix) {
        g.matrix = matrix->adjoint();
    } else {
        g.angle = -angle;
    }
    if (!g.label.empty() && g.label.back() == '\'') {
        g.label.pop_back();
    } else {
        g.label += '\'';
    }
    return g;
}

Gate Gate::rotation(std::string label, std::vector<std::size_t> targets, DenseOperator generator, double angle,
                    CostModel model) {
    Gate g;
    g.label = std::move(label);
    g.targets = std::move(targets);
    g.generator = std::move(generator);
    g.angle = angle;
    g.model = model;
    return g;
}

Gate Gate::unitary(std::string label, std::vector<std::size_t> targets, DenseOperator matrix, CostModel model) {
    Gate g;
    g.label = std::move(label);
    g.targets = std::move(targets);
    g.matrix = std::move(matrix);
    g.model = model;
    return g;
}

Gate controlled(const Gate& g, Control control) {
    if (std::find(g.targets.begin(), g.targets.end(), control.subsystem) != g.targets.end()) {
        throw Error(ErrorKind::OverlappingControl, "circuits", "control subsystem is a target of the gate");
    }
    for (const auto& c : g.controls) {
        if (c.subsystem == control.subsystem) {
            throw Error(ErrorKind::OverlappingControl, "circuits", "subsystem already controls the gate");
        }
    }
    Gate out = g;
    out.controls.push_back(control);
    return out;
}

GateCount& GateCount::operator+=(const GateCount& other) {
    raw_gates += other.raw_gates;
    elementary_count += other.elementary_count;
    for (const auto& [label, n] : other.per_label) per_label[label] += n;
    return *this;
}

Circuit::Circuit(std::vector<std::size_t> register_dims, CostModel model)
    : dims_(std::move(register_dims)), model_(model) {
    for (auto d : dims_) {
        if (d == 0) throw Error(ErrorKind::InvalidGate, "circuits", "subsystem dimension must be positive");
    }
}

std::uint64_t Circuit::total_dim() const {
    std::uint64_t total = 1;
    for (auto d : dims_) {
        if (total > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
        total *= d;
    }
    return total;
}

void Circuit::validate(const Gate& g) const {
    std::vector<std::size_t> seen;
    std::size_t local = 1;
    for (auto t : g.targets) {
        if (t >= dims_.size()) throw Error(ErrorKind::InvalidGate, "circuits", "target index out of range in " + g.label);
        if (std::find(seen.begin(), seen.end(), t) != seen.end()) {
            throw Error(ErrorKind::InvalidGate, "circuits", "repeated target in " + g.label);
        }
        seen.push_back(t);
        local *= dims_[t];
    }
    for (const auto& c : g.controls) {
        if (c.subsystem >= dims_.size()) throw Error(ErrorKind::InvalidGate, "circuits", "control index out of range");
        if (c.value >= dims_[c.subsystem]) throw Error(ErrorKind::InvalidGate, "circuits", "control value out of range");
        if (std::find(seen.begin(), seen.end(), c.subsystem) != seen.end()) {
            throw Error(ErrorKind::OverlappingControl, "circuits", "control overlaps target or control in " + g.label);
        }
        seen.push_back(c.subsystem);
    }
    // Mode-model generators live in the defining representation; only qubit
    // gates are checked against the register's local dimension.
    if (g.model != CostModel::QubitTwoLocal) return;
    const auto ld = static_cast<Eigen::Index>(local);
    if (g.matrix) {
        if (g.matrix->rows() != ld || g.matrix->cols() != ld) {
            throw Error(ErrorKind::InvalidGate, "circuits", "explicit matrix has wrong dimension in " + g.label);
        }
        if (numkit::unitarity_defect(*g.matrix) > kExplicitUnitaryTol) {
            throw Error(ErrorKind::InvalidGate, "circuits", "explicit matrix is not unitary in " + g.label);
        }
    } else {
        if (g.generator.rows() != ld || g.generator.cols() != ld) {
            throw Error(ErrorKind::InvalidGate, "circuits", "generator has wrong dimension in " + g.label);
        }
        if (!g.generator.allFinite() || !std::isfinite(g.angle)) {
            throw Error(ErrorKind::InvalidGate, "circuits", "non-finite gate data in " + g.label);
        }
    }
}

void Circuit::add(Gate gate) {
    validate(gate);
    gates_.push_back(std::move(gate));
}

void Circuit::append(const Circuit& other) {
    if (other.dims_ != dims_) throw Error(ErrorKind::DimensionMismatch, "circuits", "registers differ");
    for (const auto& g : other.gates_) gates_.push_back(g);
}

Circuit Circuit::inverse() const {
    Circuit out(dims_, model_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->inverse());
    return out;
}

double SparseState::norm() const {
    double s = 0.0;
    for (const auto& [k, a] : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

cplx SparseState::inner(const SparseState& other) const {
    cplx s = 0.0;
    for (const auto& [k, a] : amplitudes) {
        auto it = other.amplitudes.find(k);
        if (it != other.amplitudes.end()) s += std::conj(a) * it->second;
    }
    return s;
}

DenseOperator to_unitary(const Circuit& c) {
    check_model_is_qubit(c);
    const std::uint64_t n = c.total_dim();
    if (n > kMaxDenseDim && desk_cap_enabled()) {
        throw Error(ErrorKind::DimensionOverflow, "circuits", "register dimension exceeds 2^14");
    }
    DenseOperator u = DenseOperator::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& g : c.gates()) apply_gate_rows(c.register_dims(), g, u);
    return u;
}

StateVector apply(const Circuit& c, const StateVector& s) {
    check_model_is_qubit(c);
    if (static_cast<std::uint64_t>(s.size()) != c.total_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "circuits", "state dimension does not match the register");
    }
    DenseOperator m = s;
    for (const auto& g : c.gates()) apply_gate_rows(c.register_dims(), g, m);
    return m.col(0);
}

void apply_sparse(const Circuit& c, SparseState& s) {
    check_model_is_qubit(c);
    const auto& dims = c.register_dims();
    for (const auto& g : c.gates()) {
        const GateLayout lay = layout_of(dims, g);
        const DenseOperator u = g.local_unitary();
        const std::size_t local = lay.offsets.size();
        // Group amplitudes by the index with all target digits zeroed.
        std::map<std::uint64_t, Eigen::VectorXcd> groups;
        for (const auto& [idx, amp] : s.amplitudes) {
            if (!controls_hold(lay, idx)) continue;
            std::uint64_t base = idx;
            std::size_t li = 0;
            for (const auto& [stride, dim] : lay.target_digits) {
                const std::uint64_t digit = (idx / stride) % dim;
                base -= digit * stride;
                li = li * dim + digit;
            }
            auto [it, inserted] = groups.try_emplace(base);
            if (inserted) it->second = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(local));
            it->second(static_cast<Eigen::Index>(li)) = amp;
        }
        for (auto& [base, vec] : groups) {
            const Eigen::VectorXcd out = u * vec;
            for (std::size_t li = 0; li < local; ++li) {
                const std::uint64_t idx = base + lay.offsets[li];
                const cplx a = out(static_cast<Eigen::Index>(li));
                if (std::abs(a) <= kSparseDrop) {
                    s.amplitudes.erase(idx);
                } else {
                    s.amplitudes[idx] = a;
                }
            }
        }
    }
}

GateCount count(const Circuit& c) {
    GateCount out;
    for (const auto& g : c.gates()) {
        if (g.model != c.cost_model()) {
            throw Error(ErrorKind::MixedModel, "circuits",
                        "gate " + g.label + " is tagged " + std::string(to_string(g.model)) + " in a " +
                            std::string(to_string(c.cost_model())) + " circuit");
        }
        std::size_t units = g.cost_units;
        if (units == 0) {
            const double a = std::abs(g.angle);
            units = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(a - 1e-12)));
            units *= std::max<std::size_t>(1, g.controls.size());
        }
        out.raw_gates += 1;
        out.elementary_count += units;
        out.per_label[g.label] += units;
    }
    return out;
}

std::uint64_t basis_index(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& digits) {
    if (digits.size() != dims.size()) throw Error(ErrorKind::DimensionMismatch, "circuits", "digit count mismatch");
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (digits[k] >= dims[k]) throw Error(ErrorKind::OutOfRange, "circuits", "digit out of range");
        idx = idx * dims[k] + digits[k];
    }
    return idx;
}

std::vector<std::size_t> basis_digits(const std::vector<std::size_t>& dims, std::uint64_t index) {
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = static_cast<std::size_t>(index % dims[k]);
        index /= dims[k];
    }
    return digits;
}

namespace {

nlohmann::json matrix_to_json(const DenseOperator& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

DenseOperator matrix_from_json(const nlohmann::json& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = n == 0 ? 0 : static_cast<Eigen::Index>(rows.at(0).size());
    DenseOperator out(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto& e = rows.at(i).at(j);
            out(i, j) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return out;
}

}  // namespace

std::string to_jsonl(const Circuit& c) {
    std::ostringstream out;
    nlohmann::json header = {{"format", "ffsim-circuit"},
                             {"register", c.register_dims()},
                             {"cost_model", std::string(to_string(c.cost_model()))}};
    out << header.dump() << '\n';
    for (const auto& g : c.gates()) {
        nlohmann::json j;
        j["label"] = g.label;
        j["targets"] = g.targets;
        nlohmann::json controls = nlohmann::json::array();
        for (const auto& ctl : g.controls) controls.push_back({ctl.subsystem, ctl.value});
        j["controls"] = controls;
        j["angle"] = g.angle;
        if (g.model != c.cost_model()) j["model"] = std::string(to_string(g.model));
        if (g.cost_units != 0) j["cost_units"] = g.cost_units;
        if (g.matrix) {
            j["matrix"] = matrix_to_json(*g.matrix);
        } else {
            j["generator"] = matrix_to_json(g.generator);
        }
        out << j.dump() << '\n';
    }
    return out.str();
}

Circuit from_jsonl(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    try {
        if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "circuits", "missing header line");
        const auto header = nlohmann::json::parse(line);
        if (header.value("format", "") != "ffsim-circuit") {
            throw Error(ErrorKind::ParseError, "circuits", "not an ffsim circuit");
        }
        const CostModel model = cost_model_from_string(header.at("cost_model").get<std::string>());
        Circuit c(header.at("register").get<std::vector<std::size_t>>(), model);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            Gate g;
            g.label = j.at("label").get<std::string>();
            g.targets = j.at("targets").get<std::vector<std::size_t>>();
            for (const auto& ctl : j.at("controls")) {
                g.controls.push_back({ctl.at(0).get<std::size_t>(), ctl.at(1).get<std::size_t>()});
            }
            g.angle = j.at("angle").get<double>();
            g.model = j.contains("model") ? cost_model_from_string(j["model"].get<std::string>()) : model;
            g.cost_units = j.value("cost_units", std::size_t{0});
            if (j.contains("matrix")) {
                g.matrix = matrix_from_json(j["matrix"]);
            } else {
                g.generator = matrix_from_json(j.at("generator"));
            }
            c.add(std::move(g));
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, "circuits", e.what());
    }
}

DenseOperator pauli_x() {
    DenseOperator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

DenseOperator pauli_y() {
    DenseOperator m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

DenseOperator pauli_z() {
    DenseOperator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

DenseOperator hadamard() {
    DenseOperator m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

DenseOperator swap_matrix() {
    DenseOperator m = DenseOperator::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
}

DenseOperator projector_one() {
    DenseOperator m = DenseOperator::Zero(2, 2);
    m(1, 1) = 1;
    return m;
}

}  // namespace ffsim::circuits
