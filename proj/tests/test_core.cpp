#include "test_common.hpp"

#include "qdist/sdp.hpp"

using namespace qtest;
using namespace qdist;

TEST_CASE("partial trace of Phi+ is maximally mixed") {
    const auto rho = phi_plus(2);
    const auto a = partial_trace(rho, {0});
    CHECK(a.dims == std::vector<std::size_t>{2});
    CHECK(entry_dist(a.mat, 0.5 * ComplexMatrix::identity(2)) < 1e-14);
}

TEST_CASE("partial trace factorizes product states") {
    CounterRng rng(11);
    const auto r1 = states::random_density({3}, 3, rng);
    const auto r2 = states::random_density({2}, 2, rng);
    const DensityMatrix prod{{3, 2}, kernels::kron(r1.mat, r2.mat)};
    CHECK(entry_dist(partial_trace(prod, {0}).mat, r1.mat) < 1e-14);
    CHECK(entry_dist(partial_trace(prod, {1}).mat, r2.mat) < 1e-14);
}

TEST_CASE("partial trace of the 3x3 family matches direct index summation") {
    const auto tau = states::horodecki_state(0.5);
    const auto b = partial_trace(tau, {1});
    // independent oracle: sum the diagonal blocks by hand
    ComplexMatrix expect(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) expect(i, j) += tau.mat(k * 3 + i, k * 3 + j);
    CHECK(entry_dist(b.mat, expect) < 1e-14);
    CHECK(trace(b.mat).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial trace rejects bad subsystem indices") {
    CHECK_THROWS_AS(partial_trace(phi_plus(2), {5}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(phi_plus(2), {}), std::invalid_argument);
}

TEST_CASE("partial transpose spectrum of Phi+") {
    const auto pt = partial_transpose(phi_plus(2), 1);
    const auto ev = kernels::eigvals_hermitian(pt);
    CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("partial transpose fixes product basis states and is an involution") {
    std::vector<cplx> v(4, cplx(0.0, 0.0));
    v[0] = 1.0;  // |00>
    const auto rho = pure_state(v, {2, 2});
    CHECK(entry_dist(partial_transpose(rho, 1), rho.mat) < 1e-15);

    CounterRng rng(5);
    const auto r = states::random_density({2, 3}, 6, rng);
    const DensityMatrix pt{r.dims, partial_transpose(r, 1)};
    CHECK(entry_dist(partial_transpose(pt, 1), r.mat) < 1e-15);
    CHECK(std::abs(trace(pt.mat) - cplx(1.0)) < 1e-14);
    CHECK(hermiticity_defect(pt.mat) < 1e-14);
}

TEST_CASE("Werner boundary state has a vanishing partial-transpose eigenvalue") {
    const auto w = states::werner(2, 0.5);
    const auto ev = kernels::eigvals_hermitian(partial_transpose(w, 1));
    CHECK(std::abs(ev.back()) < 1e-9);
}

TEST_CASE("purification: rank-1 input gets a trivial environment") {
    CounterRng rng(21);
    const auto v = states::random_pure_vector(6, rng);
    const auto rho = pure_state(v, {2, 3});
    const auto phi = purify(rho);
    CHECK(phi.env_dim == 1);
    CHECK(phi.dims == std::vector<std::size_t>{2, 3, 1});
}

TEST_CASE("purification of the maximally mixed 1x2 split") {
    ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
    const DensityMatrix rho{{1, 2}, std::move(half)};
    const auto phi = purify(rho);
    CHECK(phi.env_dim == 2);
    DensityMatrix full{phi.dims, projector(phi.vec)};
    CHECK(entry_dist(partial_trace(full, {0, 1}).mat, rho.mat) < 1e-12);
}

TEST_CASE("purification round-trip for a full-rank isotropic state") {
    const auto rho = states::isotropic(2, 0.8);
    const auto phi = purify(rho);
    CHECK(phi.env_dim == 4);
    DensityMatrix full{phi.dims, projector(phi.vec)};
    CHECK(entry_dist(partial_trace(full, {0, 1}).mat, rho.mat) < 1e-10);
}

TEST_CASE("complementary state: trivial environment and entropy duality") {
    CounterRng rng(31);
    const auto v = states::random_pure_vector(4, rng);
    const auto rho = pure_state(v, {2, 2});
    const auto ae = complementary_state(rho);
    CHECK(ae.dims == std::vector<std::size_t>{2, 1});
    const auto a = partial_trace(rho, {0});
    CHECK(entry_dist(partial_trace(ae, {0}).mat, a.mat) < 1e-12);

    const auto iso = states::isotropic(2, 0.75);
    const auto iso_ae = complementary_state(iso);
    CHECK(iso_ae.dims[1] == 4);
    CHECK(von_neumann_entropy(iso_ae) ==
          doctest::Approx(von_neumann_entropy(partial_trace(iso, {1}))).epsilon(1e-8));
}

TEST_CASE("purification duality S(AE) = S(B), I(A>B) = -I(A>E) on random states") {
    for (std::uint64_t s : {1ull, 2ull, 3ull, 4ull}) {
        CounterRng rng(100 + s);
        const auto rho = states::random_density({2, 3}, 1 + s % 5, rng);
        const auto ae = complementary_state(rho);
        CHECK(std::abs(von_neumann_entropy(ae) - von_neumann_entropy(partial_trace(rho, {1}))) < 1e-8);
        CHECK(std::abs(coherent_information(rho) + coherent_information(ae)) < 1e-8);
    }
}

TEST_CASE("spectrum reconstructs Hermitian input within 1e-8") {
    CounterRng rng(35);
    const ComplexMatrix h = hermitize(states::ginibre(7, 7, rng));
    const Spectrum sp = spectrum(h);
    CHECK(max_abs(kernels::herm_reconstruct(sp.eigenvectors, sp.eigenvalues) - h) < 1e-8);
    for (std::size_t k = 0; k + 1 < sp.eigenvalues.size(); ++k)
        CHECK(sp.eigenvalues[k] >= sp.eigenvalues[k + 1]);
}

TEST_CASE("entropy rejects eigenvalues below the clipping floor") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0 + 1e-6;
    m(1, 1) = -1e-6;
    CHECK_THROWS_AS(von_neumann_entropy(DensityMatrix{{2}, std::move(m)}), std::invalid_argument);
    // noise above the floor is clipped silently
    ComplexMatrix ok(2, 2);
    ok(0, 0) = 1.0;
    ok(1, 1) = -5e-10;
    CHECK(von_neumann_entropy(DensityMatrix{{2}, std::move(ok)}) == doctest::Approx(0.0));
}

TEST_CASE("entropy basics") {
    CounterRng rng(41);
    const auto v = states::random_pure_vector(5, rng);
    CHECK(von_neumann_entropy(pure_state(v, {5})) == doctest::Approx(0.0).epsilon(1e-10));
    ComplexMatrix mm = (1.0 / 3.0) * ComplexMatrix::identity(3);
    CHECK(von_neumann_entropy(DensityMatrix{{3}, std::move(mm)}) ==
          doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    // scalar oracle: H(1/2, 1/6, 1/6, 1/6) = 1/2 + 1/2 log2 6
    ComplexMatrix diag(4, 4);
    diag(0, 0) = 0.5;
    for (int i = 1; i < 4; ++i) diag(i, i) = 1.0 / 6.0;
    const double expect = 0.5 + 0.5 * std::log2(6.0);
    CHECK(von_neumann_entropy(DensityMatrix{{4}, std::move(diag)}) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(1.79248).epsilon(1e-5));
}

TEST_CASE("coherent information on reference states") {
    CHECK(coherent_information(phi_plus(3)) == doctest::Approx(std::log2(3.0)).epsilon(1e-10));
    CHECK(coherent_information(states::isotropic(2, 0.5)) ==
          doctest::Approx(1.0 - (0.5 + 0.5 * std::log2(6.0))).epsilon(1e-10));
    const auto w = states::werner(2, 1.0);  // singlet
    CHECK(coherent_information(w) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coherent information is bounded by log of the smaller side") {
    CounterRng rng(51);
    const auto rho = states::random_density({2, 3}, 4, rng);
    CHECK(std::abs(coherent_information(rho)) <= 1.0 + 1e-9);
}

TEST_CASE("coherent information is convex under mixing") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        CounterRng rng(500 + s);
        const auto r1 = states::random_density({2, 2}, 4, rng);
        const auto r2 = states::random_density({2, 2}, 4, rng);
        const double lam = rng.next_double();
        ComplexMatrix mix(4, 4);
        for (std::size_t i = 0; i < 16; ++i) mix.a[i] = lam * r1.mat.a[i] + (1.0 - lam) * r2.mat.a[i];
        const double lhs = coherent_information(DensityMatrix{{2, 2}, std::move(mix)});
        const double rhs = lam * coherent_information(r1) + (1.0 - lam) * coherent_information(r2);
        CHECK(lhs <= rhs + 1e-8);
    }
}

TEST_CASE("relative entropy: identical, maximally mixed, and support violation") {
    CounterRng rng(61);
    const auto rho = states::random_density({2, 2}, 4, rng);
    CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-9));

    ComplexMatrix mm = 0.25 * ComplexMatrix::identity(4);
    CHECK(relative_entropy(phi_plus(2), DensityMatrix{{2, 2}, std::move(mm)}) ==
          doctest::Approx(2.0).epsilon(1e-10));

    std::vector<cplx> v0(4, cplx(0.0, 0.0)), v1(4, cplx(0.0, 0.0));
    v0[0] = 1.0;
    v1[3] = 1.0;
    CHECK(std::isinf(relative_entropy(pure_state(v0, {2, 2}), pure_state(v1, {2, 2}))));

    ComplexMatrix a(2, 2), b(3, 3);
    a(0, 0) = 1.0;
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(relative_entropy(DensityMatrix{{2}, a}, DensityMatrix{{3}, b}),
                    std::invalid_argument);
}

TEST_CASE("relative entropy is nonnegative and vanishes only at equality") {
    for (std::uint64_t s = 0; s < 8; ++s) {
        CounterRng rng(700 + s);
        const auto r1 = states::random_density({2, 2}, 4, rng);
        const auto r2 = states::random_density({2, 2}, 4, rng);
        const double d = relative_entropy(r1, r2);
        CHECK(d >= 0.0);
        if (d <= 1e-6) CHECK(trace_norm(r1.mat - r2.mat) <= 1e-6);
    }
}

TEST_CASE("trace norm examples") {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -2.0;
    CHECK(trace_norm(m) == doctest::Approx(3.0).epsilon(1e-12));
    CounterRng rng(71);
    const auto u = states::random_unitary(5, rng);
    CHECK(trace_norm(u) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(trace_norm(m) >= std::abs(trace(m)) - 1e-12);
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
    CHECK(binary_entropy(1.0) == doctest::Approx(0.0));
    CHECK(binary_entropy(0.11) == doctest::Approx(0.49981).epsilon(1e-4));
    CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-14));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("is_ppt on reference states") {
    CHECK(is_ppt(states::horodecki_state(0.5), 1e-9));
    CHECK_FALSE(is_ppt(phi_plus(2), 1e-9));
    CHECK(is_ppt(states::werner(2, 0.4), 1e-9));
    CHECK_FALSE(is_ppt(states::werner(2, 0.75), 1e-9));
}

TEST_CASE("mes overlap") {
    CHECK(mes_overlap(phi_plus(2)) == doctest::Approx(1.0).epsilon(1e-12));
    ComplexMatrix mm = (1.0 / 9.0) * ComplexMatrix::identity(9);
    CHECK(mes_overlap(DensityMatrix{{3, 3}, std::move(mm)}) == doctest::Approx(1.0 / 9.0));
    CHECK(mes_overlap(states::isotropic(3, 0.6)) == doctest::Approx(0.6).epsilon(1e-12));
    ComplexMatrix rect(6, 6);
    rect(0, 0) = 1.0;
    CHECK_THROWS_AS(mes_overlap(DensityMatrix{{2, 3}, std::move(rect)}), std::invalid_argument);
}

TEST_CASE("transfer matrix of the identity channel is the identity") {
    const auto id = identity_map(2);
    CHECK(entry_dist(transfer_matrix(id), ComplexMatrix::identity(4)) < 1e-15);
}

TEST_CASE("transfer map is an involution on random Chois") {
    CounterRng rng(81);
    const auto g = states::ginibre(9, 9, rng);
    const ComplexMatrix choi = g * adjoint(g);  // CP map on a qutrit
    const ComplexMatrix t = transfer_of_choi(choi, 3, 3);
    const ComplexMatrix back = choi_of_transfer(t, 3, 3);
    CHECK(entry_dist(back, choi) < 1e-12);
}

TEST_CASE("transfer of a composition is the product of transfers") {
    CounterRng rng(91);
    const auto g1 = states::ginibre(4, 4, rng);
    const auto g2 = states::ginibre(4, 4, rng);
    const QuantumMap m1{2, 2, g1 * adjoint(g1)};
    const QuantumMap m2{2, 2, g2 * adjoint(g2)};
    const QuantumMap comp = compose(m2, m1);  // m2 after m1
    CHECK(entry_dist(transfer_matrix(comp), transfer_matrix(m2) * transfer_matrix(m1)) < 1e-8);
}

TEST_CASE("apply_to_second with the identity map is a no-op") {
    CounterRng rng(101);
    const auto rho = states::random_density({2, 2}, 4, rng);
    const auto out = apply_to_second(identity_map(2), rho);
    CHECK(entry_dist(out.mat, rho.mat) < 1e-13);
}

TEST_CASE("density matrix validation names the failed invariant") {
    ComplexMatrix bad(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    const DensityMatrix rho{{2}, bad};
    const auto issue = rho.check();
    REQUIRE(issue.has_value());
    CHECK(issue->what.find("positive semidefinite") != std::string::npos);

    ComplexMatrix nh(2, 2);
    nh(0, 1) = 1.0;
    const auto issue2 = DensityMatrix{{2}, nh}.check();
    REQUIRE(issue2.has_value());
    CHECK(issue2->what.find("Hermitian") != std::string::npos);
}

TEST_CASE("trace norm agrees with the SDP route on random matrices") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        CounterRng rng(900 + s);
        const auto m = states::ginibre(5, 5, rng);
        CHECK(std::abs(trace_norm(m) - sdp::trace_norm_sdp(m)) < 1e-5);
    }
}
