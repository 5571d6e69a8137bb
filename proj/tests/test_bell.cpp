#include "test_common.hpp"

#include <functional>
#include <set>

#include "qdist/bell.hpp"

using namespace qtest;
using namespace qdist;
using namespace qdist::bell;

namespace {

std::vector<BellIndex> from_linear(std::size_t d, std::initializer_list<std::size_t> ks) {
    std::vector<BellIndex> out;
    for (auto k : ks) out.push_back(BellIndex::from_linear(k, d));
    return out;
}

std::set<std::set<std::size_t>> as_sets(const std::vector<MCBlock>& blocks) {
    std::set<std::set<std::size_t>> out;
    for (const auto& b : blocks) {
        std::set<std::size_t> s;
        for (const auto& i : b.indices) s.insert(i.linear());
        out.insert(std::move(s));
    }
    return out;
}

}  // namespace

TEST_CASE("generalized Paulis: qubit case and algebra") {
    const auto [x, z] = gen_pauli(2);
    ComplexMatrix px(2, 2), pz(2, 2);
    px(0, 1) = 1.0;
    px(1, 0) = 1.0;
    pz(0, 0) = 1.0;
    pz(1, 1) = -1.0;
    CHECK(entry_dist(x, px) < 1e-15);
    CHECK(entry_dist(z, pz) < 1e-15);

    const auto p3 = gen_pauli(3);
    CHECK(entry_dist(p3.X * p3.X * p3.X, ComplexMatrix::identity(3)) < 1e-12);
    CHECK(entry_dist(p3.Z * p3.Z * p3.Z, ComplexMatrix::identity(3)) < 1e-12);

    for (std::size_t d : {2, 3, 5}) {
        const auto p = gen_pauli(d);
        const cplx omega = std::exp(cplx(0.0, 2.0 * 3.14159265358979323846 / static_cast<double>(d)));
        CHECK(max_abs(p.X * p.Z - omega * (p.Z * p.X)) < 1e-12);
        CHECK(entry_dist(p.X * adjoint(p.X), ComplexMatrix::identity(d)) < 1e-12);
        CHECK(entry_dist(p.Z * adjoint(p.Z), ComplexMatrix::identity(d)) < 1e-12);
    }
    CHECK_THROWS_AS(gen_pauli(1), std::invalid_argument);
}

TEST_CASE("bell states: qubit cases and orthonormality") {
    const auto p00 = bell_state(2, 0, 0);
    CHECK(std::abs(p00[0] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(p00[3] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(p00[1]) + std::abs(p00[2]) < 1e-15);

    const auto p11 = bell_state(2, 1, 1);  // (|01> - |10>)/sqrt(2)
    CHECK(std::abs(p11[1] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(p11[2] + cplx(1.0 / std::sqrt(2.0))) < 1e-15);

    // Gram matrix of all nine d=3 vectors
    std::vector<std::vector<cplx>> vs;
    for (std::size_t n = 0; n < 3; ++n)
        for (std::size_t m = 0; m < 3; ++m) vs.push_back(bell_state(3, n, m));
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) {
            cplx ip = 0.0;
            for (std::size_t k = 0; k < 9; ++k) ip += std::conj(vs[i][k]) * vs[j][k];
            CHECK(std::abs(ip - (i == j ? cplx(1.0) : cplx(0.0))) < 1e-12);
        }
    CHECK_THROWS_AS(bell_state(3, 3, 0), std::invalid_argument);
}

TEST_CASE("op_of_vec structure") {
    const auto op = op_of_vec(max_entangled_vector(3), 3, 3);
    CHECK(entry_dist(op, (1.0 / std::sqrt(3.0)) * ComplexMatrix::identity(3)) < 1e-15);

    std::vector<cplx> v01(4, cplx(0.0, 0.0));
    v01[1] = 1.0;  // |0>|1>
    const auto e01 = op_of_vec(v01, 2, 2);
    CHECK(std::abs(e01(0, 1) - cplx(1.0)) < 1e-15);
    CHECK(frobenius_norm(e01) == doctest::Approx(1.0));

    // op(bell(n,m)) = (X^m Z^n)^T / sqrt(d) entrywise
    for (std::size_t d : {2, 3}) {
        const auto p = gen_pauli(d);
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t m = 0; m < d; ++m) {
                ComplexMatrix xmzn = ComplexMatrix::identity(d);
                for (std::size_t i = 0; i < m; ++i) xmzn = p.X * xmzn;
                ComplexMatrix zn = ComplexMatrix::identity(d);
                for (std::size_t i = 0; i < n; ++i) zn = p.Z * zn;
                xmzn = xmzn * zn;
                const ComplexMatrix expect = (1.0 / std::sqrt(static_cast<double>(d))) * transpose(xmzn);
                CHECK(entry_dist(op_of_vec(bell_state(d, n, m), d, d), expect) < 1e-12);
            }
    }
    CHECK_THROWS_AS(op_of_vec(std::vector<cplx>(5), 2, 2), std::invalid_argument);
}

TEST_CASE("ssd: commuting-unitary family and singletons") {
    CounterRng rng(17);
    const auto u = states::random_unitary(3, rng);
    const auto phi = max_entangled_vector(3);
    const auto apply_b = [&](const ComplexMatrix& op) {
        std::vector<cplx> out(9, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 3; ++k) out[i * 3 + j] += op(j, k) * phi[i * 3 + k];
        return out;
    };
    CHECK(is_ssd({apply_b(u), apply_b(adjoint(u))}, 3, 3));
    CHECK(is_ssd({apply_b(u)}, 3, 3));
    CHECK(is_ssd({apply_b(u), apply_b(u * u), apply_b(u * u * u)}, 3, 3));
}

TEST_CASE("ssd agrees with the congruence test on all small Bell subsets") {
    for (std::size_t d : {2, 3}) {
        const std::size_t n2 = d * d;
        std::vector<std::vector<cplx>> vecs(n2);
        std::vector<BellIndex> all(n2);
        for (std::size_t k = 1; k <= n2; ++k) {
            all[k - 1] = BellIndex::from_linear(k, d);
            vecs[k - 1] = bell_state(d, all[k - 1].n, all[k - 1].m);
        }
        // all subsets of size 2 and 3
        for (std::size_t a = 0; a < n2; ++a)
            for (std::size_t b = a + 1; b < n2; ++b) {
                CHECK(is_ssd({vecs[a], vecs[b]}, d, d) == block_is_mc(d, {all[a], all[b]}));
                if (d >= 3)
                    for (std::size_t c = b + 1; c < n2; ++c)
                        CHECK(is_ssd({vecs[a], vecs[b], vecs[c]}, d, d) ==
                              block_is_mc(d, {all[a], all[b], all[c]}));
            }
    }
}

TEST_CASE("congruence test on cited blocks") {
    CHECK(block_is_mc(3, from_linear(3, {1, 6, 8})));
    for (std::size_t a = 1; a <= 4; ++a)
        for (std::size_t b = a + 1; b <= 4; ++b) CHECK(block_is_mc(2, from_linear(2, {a, b})));
    CHECK_FALSE(block_is_mc(3, from_linear(3, {1, 2, 4})));
    CHECK_THROWS_AS(block_is_mc(2, from_linear(2, {1, 2, 3})), std::invalid_argument);
}

TEST_CASE("block enumeration: counts and table rows") {
    const auto b2 = enumerate_mc_blocks(2);
    CHECK(b2.size() == 6);
    CHECK(as_sets(b2) == std::set<std::set<std::size_t>>{
                             {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});

    const auto b3 = enumerate_mc_blocks(3);
    CHECK(b3.size() == 12);
    std::vector<std::size_t> first;
    for (const auto& i : b3.front().indices) first.push_back(i.linear());
    CHECK(first == std::vector<std::size_t>{1, 2, 3});
    CHECK(as_sets(b3) == std::set<std::set<std::size_t>>{{1, 2, 3},
                                                         {1, 4, 7},
                                                         {1, 5, 9},
                                                         {1, 6, 8},
                                                         {2, 4, 9},
                                                         {2, 5, 8},
                                                         {2, 6, 7},
                                                         {3, 4, 8},
                                                         {3, 5, 7},
                                                         {3, 6, 9},
                                                         {4, 5, 6},
                                                         {7, 8, 9}});

    CHECK(enumerate_mc_blocks(4).size() == 28);
    const auto b5 = enumerate_mc_blocks(5);
    CHECK(b5.size() == 30);
    std::vector<std::size_t> last;
    for (const auto& i : b5.back().indices) last.push_back(i.linear());
    CHECK(last == std::vector<std::size_t>{21, 22, 23, 24, 25});
    CHECK_THROWS_AS(enumerate_mc_blocks(7), std::invalid_argument);
}

TEST_CASE("enumeration is exhaustive: excluded size-d subsets violate the congruence") {
    for (std::size_t d : {2, 3}) {
        const auto valid = as_sets(enumerate_mc_blocks(d));
        const std::size_t n2 = d * d;
        std::vector<std::size_t> pick(d);
        // iterate over all size-d subsets of [1, d^2]
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t next) {
            if (pos == d) {
                std::vector<BellIndex> idx;
                std::set<std::size_t> key;
                for (auto k : pick) {
                    idx.push_back(BellIndex::from_linear(k, d));
                    key.insert(k);
                }
                CHECK(block_is_mc(d, idx) == (valid.count(key) == 1));
                return;
            }
            for (std::size_t k = next; k <= n2; ++k) {
                pick[pos] = k;
                rec(pos + 1, k + 1);
            }
        };
        rec(0, 1);
    }
}

TEST_CASE("mc state from a singleton block is the Bell projector") {
    MCBlock block{2, {BellIndex::from_linear(1, 2)}};
    ComplexMatrix alpha(1, 1);
    alpha(0, 0) = 1.0;
    const auto omega = mc_state_from_block(block, alpha);
    CHECK(entry_dist(omega.mat, phi_plus(2).mat) < 1e-14);
}

TEST_CASE("rank-1 uniform block state has coherent information log d") {
    MCBlock block{3, from_linear(3, {1, 6, 8})};
    ComplexMatrix alpha(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) alpha(i, j) = 1.0 / 3.0;
    const auto omega = mc_state_from_block(block, alpha);
    CHECK(coherent_information(omega) == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
}

TEST_CASE("two-Bell mixture reproduces 1 - h(p)") {
    MCBlock block{2, from_linear(2, {1, 2})};
    for (double p : {0.1, 0.35, 0.8}) {
        ComplexMatrix alpha(2, 2);
        alpha(0, 0) = 1.0 - p;
        alpha(1, 1) = p;
        const auto omega = mc_state_from_block(block, alpha);
        CHECK(coherent_information(omega) == doctest::Approx(1.0 - binary_entropy(p)).epsilon(1e-9));
    }
}

TEST_CASE("mc_state_from_block validates inputs") {
    MCBlock bad{3, from_linear(3, {1, 2, 4})};
    ComplexMatrix alpha(3, 3);
    for (std::size_t i = 0; i < 3; ++i) alpha(i, i) = 1.0 / 3.0;
    CHECK_THROWS_AS(mc_state_from_block(bad, alpha), std::invalid_argument);
    MCBlock ok{3, from_linear(3, {1, 6, 8})};
    CHECK_THROWS_AS(mc_state_from_block(ok, ComplexMatrix(2, 2)), std::invalid_argument);
}

TEST_CASE("mc coherent information: closed cases and agreement with the entropy route") {
    ComplexMatrix cc(2, 2);
    cc(0, 0) = 0.3;
    cc(1, 1) = 0.7;
    CHECK(mc_coherent_information(cc) == doctest::Approx(0.0).epsilon(1e-12));

    ComplexMatrix pure(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) pure(i, j) = 1.0 / 3.0;
    CHECK(mc_coherent_information(pure) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

    const auto blocks = enumerate_mc_blocks(3);
    for (std::uint64_t s = 0; s < 6; ++s) {
        CounterRng rng(1300 + s);
        const auto& block = blocks[rng.next_u64() % blocks.size()];
        const auto alpha = states::random_mc_matrix(3, rng);
        const auto omega = mc_state_from_block(block, alpha);
        const auto comp = mc_alpha_computational(block, alpha);
        CHECK(mc_coherent_information(comp) == doctest::Approx(coherent_information(omega)).epsilon(1e-8));
    }
}

TEST_CASE("mc states have symmetric nonnegative coherent information") {
    const auto blocks = enumerate_mc_blocks(3);
    for (std::uint64_t s = 0; s < 8; ++s) {
        CounterRng rng(1400 + s);
        const auto& block = blocks[rng.next_u64() % blocks.size()];
        const auto omega = mc_state_from_block(block, states::random_mc_matrix(3, rng));
        const double fwd = coherent_information(omega);
        const double rev = coherent_information_reverse(omega);
        CHECK(std::abs(fwd - rev) < 1e-8);
        CHECK(fwd >= -1e-9);
    }
}

TEST_CASE("dephasing: computational-form inputs") {
    const auto dephased = dephase_mc(phi_plus(2));
    ComplexMatrix expect(4, 4);
    expect(0, 0) = 0.5;
    expect(3, 3) = 0.5;
    CHECK(entry_dist(dephased.mat, expect) < 1e-14);
    CHECK(entry_dist(dephase_mc(dephased).mat, expect) < 1e-14);  // fixed point
    CHECK(is_ppt(dephased, 1e-9));

    CHECK_THROWS_AS(dephase_mc(states::werner(2, 0.8)), std::invalid_argument);
}

TEST_CASE("dephasing identity D(omega || omega') = I(A>B)") {
    const auto blocks = enumerate_mc_blocks(3);
    for (std::uint64_t s = 0; s < 6; ++s) {
        CounterRng rng(1500 + s);
        const auto& block = blocks[rng.next_u64() % blocks.size()];
        const auto alpha = states::random_mc_matrix(3, rng);
        const auto omega = mc_state_from_block(block, alpha);
        const auto dephased = dephased_mc_block_state(block, alpha);
        CHECK(is_ppt(dephased, 1e-9));
        CHECK(relative_entropy(omega, dephased) ==
              doctest::Approx(coherent_information(omega)).epsilon(1e-8));
    }
}

TEST_CASE("bell ladder reproduces the isotropic closed form") {
    for (std::size_t d : {2, 3, 4, 5}) {
        MCBlock block{d, {}};
        for (std::size_t i = 0; i < d; ++i) block.indices.push_back(BellIndex{0, i, d});
        for (int i = 0; i <= 9; ++i) {
            const double f = 1.0 / static_cast<double>(d) +
                             (1.0 - 1.0 / static_cast<double>(d)) * static_cast<double>(i) / 9.0;
            ComplexMatrix alpha(d, d);
            alpha(0, 0) = f;
            for (std::size_t k = 1; k < d; ++k) alpha(k, k) = (1.0 - f) / static_cast<double>(d - 1);
            const auto omega = mc_state_from_block(block, alpha);
            const double expect = std::log2(static_cast<double>(d)) -
                                  (1.0 - f) * std::log2(static_cast<double>(d - 1)) - binary_entropy(f);
            CHECK(coherent_information(omega) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}
