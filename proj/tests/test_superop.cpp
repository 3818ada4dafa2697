// test_superop.cpp — Jump, anticommutator and interaction superoperators, the Lindblad generator and exp_jump

#include "support.hpp"
#include "twomode/effective.hpp"

#include <doctest.h>

using namespace twomode;
using twomode::test::max_abs;

namespace {

DensityMatrix ket_bra(const FockSpace& s, Occupation r, Occupation c) { return DensityMatrix::outer(s, r, c); }

DensityMatrix jump_sum(const DensityMatrix& rho) { return jump_super(Mode::a, rho) + jump_super(Mode::b, rho); }

}  // namespace

TEST_CASE("model parameters validate their inputs") {
    CHECK_NOTHROW(ModelParams(1.0, 0.0, 0.0));
    CHECK_THROWS_AS(ModelParams(-1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1.0, -0.1, 0.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1.0, 0.0, std::numeric_limits<double>::infinity()), std::domain_error);
    const ModelParams p(1.0, 0.75, 0.25);
    CHECK(p.gamma() == 1.0);
    CHECK(p.delta() == -0.5);
}

TEST_CASE("jump superoperator examples") {
    const FockSpace s(3);
    CHECK(max_abs(jump_super(Mode::a, DensityMatrix::projector(s, 0, 0)).matrix()) == 0.0);
    const DensityMatrix out = jump_super(Mode::a, DensityMatrix::projector(s, 1, 0));
    CHECK(max_abs((out - Complex(2.0) * DensityMatrix::projector(s, 0, 0)).matrix()) < 1e-15);

    const DensityMatrix half = Complex(0.5) * jump_sum(DensityMatrix::projector(s, 1, 1));
    const DensityMatrix expect = DensityMatrix::projector(s, 0, 1) + DensityMatrix::projector(s, 1, 0);
    CHECK(max_abs((half - expect).matrix()) < 1e-15);
}

TEST_CASE("anticommutator superoperator examples") {
    const FockSpace s(3);
    CHECK(max_abs(anticomm_super(Mode::a, DensityMatrix::projector(s, 0, 0)).matrix()) == 0.0);
    const DensityMatrix la = anticomm_super(Mode::a, DensityMatrix::projector(s, 1, 0));
    CHECK(max_abs((la - Complex(2.0) * DensityMatrix::projector(s, 1, 0)).matrix()) < 1e-15);
    const DensityMatrix lb = anticomm_super(Mode::b, ket_bra(s, {1, 1}, {0, 1}));
    CHECK(max_abs((lb - Complex(2.0) * ket_bra(s, {1, 1}, {0, 1})).matrix()) < 1e-15);
}

TEST_CASE("interaction superoperator examples") {
    const FockSpace s(3);
    CHECK(max_abs(interaction_super(DensityMatrix::projector(s, 0, 0)).matrix()) == 0.0);
    CHECK(max_abs(interaction_super(DensityMatrix(s, CMatrix::Identity(s.dim(), s.dim()))).matrix()) < 1e-15);
    const DensityMatrix out = interaction_super(DensityMatrix::projector(s, 1, 0));
    const DensityMatrix expect = ket_bra(s, {0, 1}, {1, 0}) - ket_bra(s, {1, 0}, {0, 1});
    CHECK(max_abs((out - expect).matrix()) < 1e-15);
}

TEST_CASE("superoperators match dense brute-force products") {
    const int n_max = 4;
    const FockSpace s(n_max);
    test::Rng rng(21);
    const CMatrix a = test::ladder_reference(Mode::a, n_max);
    const CMatrix b = test::ladder_reference(Mode::b, n_max);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho(s, test::random_matrix(s.dim(), rng));
        const CMatrix& r = rho.matrix();
        CHECK(max_abs(jump_super(Mode::a, rho).matrix() - 2.0 * a * r * a.adjoint()) < 1e-12);
        CHECK(max_abs(jump_super(Mode::b, rho).matrix() - 2.0 * b * r * b.adjoint()) < 1e-12);
        const CMatrix na = a.adjoint() * a;
        CHECK(max_abs(anticomm_super(Mode::a, rho).matrix() - (na * r + r * na)) < 1e-12);
        const CMatrix sop = a * b.adjoint() + a.adjoint() * b;
        CHECK(max_abs(interaction_super(rho).matrix() - (sop * r - r * sop)) < 1e-12);
        const ModelParams p(0.8, 0.3, 1.1);
        CHECK(max_abs(lindblad_rhs(p, rho).matrix() - test::lindblad_reference(p, r, n_max)) < 1e-11);
    }
}

TEST_CASE("commutator identities of the generator pieces") {
    const FockSpace s(4);
    test::Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        // Support within n_max total photons keeps the truncated ladder operators exact.
        const DensityMatrix rho = test::random_density(s, 4, 1 + trial % 5, rng);
        const DensityMatrix lhs = jump_sum(interaction_super(rho)) - interaction_super(jump_sum(rho));
        CHECK(max_abs(lhs.matrix()) < 1e-12);
        for (Mode m : {Mode::a, Mode::b}) {
            const DensityMatrix c = jump_super(m, anticomm_super(m, rho)) - anticomm_super(m, jump_super(m, rho));
            CHECK(max_abs((c - Complex(2.0) * jump_super(m, rho)).matrix()) < 1e-12);
        }
    }
}

TEST_CASE("lindblad generator examples and structure") {
    const FockSpace s(3);
    const ModelParams p(1.0, 0.6, 0.2);
    CHECK(max_abs(lindblad_rhs(p, DensityMatrix::projector(s, 0, 0)).matrix()) == 0.0);

    const double ga = 0.7;
    const DensityMatrix decay = lindblad_rhs(ModelParams(0.0, ga, 0.0), DensityMatrix::projector(s, 1, 0));
    const DensityMatrix expect =
        Complex(2.0 * ga) * (DensityMatrix::projector(s, 0, 0) - DensityMatrix::projector(s, 1, 0));
    CHECK(max_abs((decay - expect).matrix()) < 1e-15);

    test::Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = test::random_density(s, 6, 1 + trial % 3, rng);
        const DensityMatrix out = lindblad_rhs(p, rho);
        CHECK(std::abs(out.trace()) < 1e-12);
        CHECK(out.hermiticity_defect() < 1e-12);
    }
}

TEST_CASE("exp_jump examples") {
    const FockSpace s(3);
    const DensityMatrix out = exp_jump(JumpSign::plus, DensityMatrix::projector(s, 1, 1));
    const DensityMatrix expect = DensityMatrix::projector(s, 0, 0) + DensityMatrix::projector(s, 1, 1) +
                                 DensityMatrix::projector(s, 0, 1) + DensityMatrix::projector(s, 1, 0);
    CHECK(max_abs((out - expect).matrix()) < 1e-15);
    for (JumpSign sign : {JumpSign::plus, JumpSign::minus}) {
        const DensityMatrix vac = exp_jump(sign, DensityMatrix::projector(s, 0, 0));
        CHECK(max_abs((vac - DensityMatrix::projector(s, 0, 0)).matrix()) == 0.0);
    }
}

TEST_CASE("exp_jump pair is an inverse and commutes with the adjoint") {
    test::Rng rng(13);
    for (int n_max : {2, 4, 6}) {
        const FockSpace s(n_max);
        for (int trial = 0; trial < 5; ++trial) {
            // Full-support operands exercise the longest series.
            const DensityMatrix rho = test::random_operand(s, 2 * n_max, rng);
            const DensityMatrix up = exp_jump(JumpSign::plus, rho);
            const DensityMatrix round = exp_jump(JumpSign::minus, up);
            CHECK(max_abs((round - rho).matrix()) < 1e-13 * max_abs(up.matrix()));
            for (JumpSign sign : {JumpSign::plus, JumpSign::minus}) {
                const DensityMatrix l = exp_jump(sign, rho).adjoint();
                const DensityMatrix r = exp_jump(sign, rho.adjoint());
                CHECK(max_abs((l - r).matrix()) < 1e-15 * max_abs(l.matrix()) + 1e-13);
            }
        }
    }
}

TEST_CASE("exp_jump matches the dense matrix exponential of the jump generator") {
    const int n_max = 3;
    const FockSpace s(n_max);
    const int d = s.dim();
    const CMatrix a = test::ladder_reference(Mode::a, n_max);
    const CMatrix b = test::ladder_reference(Mode::b, n_max);
    // Row-major vectorization: vec(A X B) = (A kron B^T) vec(X).
    CMatrix gen = CMatrix::Zero(d * d, d * d);
    for (const CMatrix& c : {a, b}) {
        const CMatrix ct = c.adjoint().transpose();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (c(i, j) != Complex(0.0)) gen.block(i * d, j * d, d, d) += c(i, j) * ct;
    }
    test::Rng rng(17);
    const DensityMatrix rho = test::random_operand(s, 2 * n_max, rng);
    for (int sign : {-1, 1}) {
        const CMatrix e = test::taylor_expm(gen * double(sign));
        CMatrix vec(d * d, 1);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) vec(i * d + j, 0) = rho(i, j);
        const CMatrix out = e * vec;
        const DensityMatrix got = exp_jump(sign > 0 ? JumpSign::plus : JumpSign::minus, rho);
        double err = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) err = std::max(err, std::abs(out(i * d + j, 0) - got(i, j)));
        CHECK(err < 1e-10 * max_abs(out));
    }
}

TEST_CASE("jump removal turns the Lindblad flow into the non-Hermitian flow with quadratic step error") {
    const int n_max = 4;
    const FockSpace s(n_max);
    test::Rng rng(23);
    for (const ModelParams& p : {ModelParams(1.0, 0.75, 0.0), ModelParams(1.0, 0.5, 0.5), ModelParams(1.0, 3.0, 0.2)}) {
        const DensityMatrix rho = test::random_density(s, n_max, 3, rng);
        const Operator h = h_eff(p, s);
        const double rate = std::max({p.g(), p.gamma_a(), p.gamma_b()});
        auto error = [&](double dz) {
            const DensityMatrix varrho = exp_jump(JumpSign::plus, rho);
            const DensityMatrix stepped = varrho + Complex(dz) * von_neumann_rhs(h, varrho);
            const DensityMatrix back = exp_jump(JumpSign::minus, stepped);
            return max_abs(back.matrix() - test::lindblad_flow_series(p, rho.matrix(), n_max, dz));
        };
        const double dz = 0.02 / rate;
        const double ratio = error(dz) / error(dz / 2);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }
}
