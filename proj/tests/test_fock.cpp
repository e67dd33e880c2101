#include <cmath>
#include <random>

#include "doctest.h"
#include "fockbench/errors.hpp"
#include "fockbench/fock.hpp"
#include "test_support.hpp"

using namespace fockbench;
using fockbench::testing::is_physical;
using fockbench::testing::max_abs_diff;
using fockbench::testing::random_state;
using fockbench::testing::random_vector;

namespace {

double mean_photon_number(const Vector& amps) {
  double n = 0.0;
  for (Eigen::Index k = 0; k < amps.size(); ++k) n += k * std::norm(amps(k));
  return n / amps.squaredNorm();
}

MultiModeState two_mode(const Vector& s, const Vector& i) {
  return MultiModeState::single(Mode::signal, s).tensor(MultiModeState::single(Mode::idler, i));
}

}  // namespace

TEST_CASE("coherent_state") {
  SUBCASE("vacuum") {
    const auto res = coherent_state(0.0, 10);
    CHECK(res.state.amplitudes()(0) == Complex(1.0));
    CHECK(res.state.amplitudes().tail(9).norm() == 0.0);
  }
  SUBCASE("Poisson weight at n = 0") {
    const auto res = coherent_state(1.0, 20);
    CHECK(std::abs(std::norm(res.state.amplitudes()(0)) - std::exp(-1.0)) < 1e-9);
    CHECK(res.state.norm_sq() == doctest::Approx(1.0));
  }
  SUBCASE("mean photon number") {
    const auto res = coherent_state(1.5, 25);
    CHECK(std::abs(mean_photon_number(res.state.amplitudes()) - 2.25) < 1e-6);
    CHECK(res.tail_mass < 1e-9);
    CHECK_FALSE(res.tail_warning());
  }
  SUBCASE("renormalization is reported") {
    const auto res = coherent_state(2.0, 4);
    CHECK(res.norm_sq < 1.0);
    CHECK(res.tail_warning());
    CHECK(res.state.norm_sq() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(coherent_state(0.5, 1), InvalidArgument);
}

TEST_CASE("ladder operators") {
  SUBCASE("creation on vacuum") {
    const auto res = apply_creation(coherent_state(0.0, 6).state, Mode::signal);
    CHECK(res.norm_sq == doctest::Approx(1.0));
    CHECK(std::abs(res.state.amplitudes()(1) - 1.0) < 1e-15);
  }
  SUBCASE("photon-added coherent moments") {
    const auto res = apply_creation(coherent_state(1.0, 20).state, Mode::signal);
    // (|a|^4 + 3|a|^2 + 1) / (1 + |a|^2) at |a| = 1
    CHECK(std::abs(mean_photon_number(res.state.amplitudes()) - 2.5) < 1e-6);
  }
  SUBCASE("creation at the cutoff loses the amplitude") {
    Vector top = Vector::Zero(5);
    top(4) = 1.0;
    const auto res = apply_creation(MultiModeState::single(Mode::signal, top), Mode::signal);
    CHECK(res.norm_sq == 0.0);
    CHECK(res.tail_warning());
  }
  SUBCASE("annihilation") {
    Vector one = Vector::Zero(4);
    one(1) = 1.0;
    auto res = apply_annihilation(MultiModeState::single(Mode::signal, one), Mode::signal);
    CHECK(res.norm_sq == doctest::Approx(1.0));
    CHECK(std::abs(res.state.amplitudes()(0) - 1.0) < 1e-15);

    res = apply_annihilation(coherent_state(0.0, 4).state, Mode::signal);
    CHECK(res.norm_sq == 0.0);

    // a|alpha> = alpha|alpha>
    res = apply_annihilation(coherent_state(1.0, 20).state, Mode::signal);
    CHECK(std::abs(res.norm_sq - 1.0) < 1e-9);
  }
  SUBCASE("unknown mode") {
    const auto s = coherent_state(0.3, 5).state;
    CHECK_THROWS_AS(apply_creation(s, Mode::idler), InvalidArgument);
    CHECK_THROWS_AS(apply_annihilation(s, Mode::idler_parasite), InvalidArgument);
  }
  SUBCASE("a a^dagger = n + 1 below the cutoff") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector s = random_vector(rng, 8, 6);
      const Vector i = random_vector(rng, 5, 5);
      const MultiModeState psi = two_mode(s, i);
      const auto up = apply_creation(psi, Mode::signal);
      const auto back = apply_annihilation(up.state, Mode::signal);
      const auto down = apply_annihilation(psi, Mode::signal);
      const auto forth = apply_creation(down.state, Mode::signal);
      // [a, a^dagger] = 1 on levels where neither product touches the cutoff
      const Vector comm = back.state.amplitudes() - forth.state.amplitudes();
      CHECK(max_abs_diff(comm, psi.amplitudes()) < 1e-12);
    }
  }
}

TEST_CASE("MultiModeState layout") {
  Vector s(3);
  s << 1.0, 2.0, 3.0;
  Vector i(2);
  i << 10.0, 20.0;
  const MultiModeState psi = two_mode(s, i);
  CHECK(psi.amplitude({2, 1}) == Complex(60.0));
  CHECK(psi.amplitudes()(2 * 2 + 1) == Complex(60.0));
  CHECK(psi.stride(0) == 2);
  CHECK(psi.stride(1) == 1);
  CHECK_THROWS_AS(MultiModeState({Mode::signal, Mode::signal}, {2, 2}), InvalidArgument);
  CHECK_THROWS_AS(ModePair(Mode::idler, Mode::idler), InvalidArgument);
}

TEST_CASE("two_mode_squeeze") {
  const ModePair si{Mode::signal, Mode::idler};
  SUBCASE("r = 0 is the identity") {
    std::mt19937_64 rng(3);
    const MultiModeState psi = two_mode(random_vector(rng, 6, 6), random_vector(rng, 6, 6));
    CHECK(max_abs_diff(two_mode_squeeze(psi, si, 0.0).amplitudes(), psi.amplitudes()) == 0.0);
  }
  SUBCASE("two-mode squeezed vacuum amplitudes") {
    const MultiModeState vac({Mode::signal, Mode::idler}, {20, 20});
    const auto tmsv = two_mode_squeeze(vac, si, 0.105);
    const double expected = std::tanh(0.105) / std::cosh(0.105);
    CHECK(std::abs(tmsv.amplitude({1, 1}).real() - expected) < 1e-6);
    CHECK(std::abs(expected - 0.10404) < 1e-5);
  }
  SUBCASE("reduced state is thermal") {
    const MultiModeState vac({Mode::signal, Mode::idler}, {25, 25});
    const auto rho = partial_trace(two_mode_squeeze(vac, si, 0.45), Mode::signal);
    double n = 0.0;
    for (int k = 0; k < rho.dim(); ++k) n += k * rho.population(k);
    CHECK(std::abs(n - std::sinh(0.45) * std::sinh(0.45)) < 1e-5);
  }
  SUBCASE("inverse squeeze undoes it") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const MultiModeState psi = two_mode(random_vector(rng, 20, 4), random_vector(rng, 20, 4));
      const auto there = two_mode_squeeze(psi, si, 0.3);
      const auto back = two_mode_squeeze(there, si, -0.3);
      CHECK(max_abs_diff(back.amplitudes(), psi.amplitudes()) < 1e-8);
      CHECK(std::abs(there.norm_sq() - 1.0) < 1e-9);
    }
  }
  SUBCASE("acts only on the named pair") {
    MultiModeState vac({Mode::signal, Mode::idler, Mode::idler_parasite}, {6, 6, 6});
    const auto out = two_mode_squeeze(vac, {Mode::signal, Mode::idler_parasite}, 0.2);
    CHECK(partial_trace(out, Mode::idler).population(0) == doctest::Approx(1.0));
    CHECK(std::abs(out.amplitude({1, 0, 1}).real() - std::tanh(0.2) / std::cosh(0.2)) < 1e-6);
  }
  SUBCASE("errors") {
    const MultiModeState vac({Mode::signal, Mode::idler}, {4, 4});
    CHECK_THROWS_AS(two_mode_squeeze(vac, si, std::nan("")), InvalidArgument);
    CHECK_THROWS_AS(two_mode_squeeze(vac, {Mode::signal, Mode::signal_parasite}, 0.1), InvalidArgument);
  }
}

TEST_CASE("partial_trace") {
  std::mt19937_64 rng(17);
  SUBCASE("product state factorizes") {
    const Vector s = random_vector(rng, 6, 6);
    Vector vac = Vector::Zero(4);
    vac(0) = 1.0;
    const auto rho = partial_trace(two_mode(s, vac), Mode::signal);
    CHECK(max_abs_diff(rho.matrix(), s * s.adjoint()) < 1e-14);
  }
  SUBCASE("TMSV purity") {
    const MultiModeState vac({Mode::signal, Mode::idler}, {30, 30});
    const auto tmsv = two_mode_squeeze(vac, {Mode::signal, Mode::idler}, 0.3);
    const double expected = 1.0 / (2.0 * std::sinh(0.3) * std::sinh(0.3) + 1.0);
    CHECK(std::abs(partial_trace(tmsv, Mode::signal).purity() - expected) < 1e-5);
    CHECK(std::abs(partial_trace(tmsv, Mode::idler).purity() - expected) < 1e-5);
  }
  SUBCASE("maximally correlated") {
    MultiModeState bell({Mode::signal, Mode::idler}, {3, 3});
    bell.amplitudes().setZero();
    bell.amplitudes()(0) = bell.amplitudes()(4) = 1.0 / std::sqrt(2.0);
    const auto rho = partial_trace(bell, Mode::idler);
    CHECK(std::abs(rho(0, 0).real() - 0.5) < 1e-15);
    CHECK(std::abs(rho(1, 1).real() - 0.5) < 1e-15);
    CHECK(std::abs(rho(0, 1)) < 1e-15);
  }
  SUBCASE("trace equals squared norm") {
    for (int trial = 0; trial < 10; ++trial) {
      MultiModeState psi({Mode::signal, Mode::idler, Mode::signal_parasite}, {4, 3, 5});
      for (auto& a : psi.amplitudes()) a = fockbench::testing::random_complex(rng);
      for (Mode m : psi.labels()) {
        const auto rho = partial_trace(psi, m);
        CHECK(std::abs(rho.trace() - psi.norm_sq()) < 1e-10 * psi.norm_sq());
        CHECK(rho.hermiticity_error() <= 1e-12);
      }
    }
  }
}

TEST_CASE("loss_channel") {
  std::mt19937_64 rng(23);
  const auto one = DensityMatrix::fock(1, 6);
  SUBCASE("unit transmission") {
    const auto rho = random_state(rng, 8);
    CHECK(max_abs_diff(loss_channel(rho, 1.0).matrix(), rho.matrix()) == 0.0);
  }
  SUBCASE("single photon") {
    const auto out = loss_channel(one, 0.71);
    CHECK(std::abs(out(1, 1).real() - 0.71) < 1e-10);
    CHECK(std::abs(out(0, 0).real() - 0.29) < 1e-10);
    CHECK(std::abs(out.trace() - 1.0) < 1e-10);
  }
  SUBCASE("zero transmission gives vacuum") {
    const auto out = loss_channel(random_state(rng, 7), 0.0);
    CHECK(max_abs_diff(out.matrix(), DensityMatrix::vacuum(7).matrix()) < 1e-12);
  }
  SUBCASE("composition") {
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double e1 = u(rng), e2 = u(rng);
      const auto rho = random_state(rng, 10);
      const auto twice = loss_channel(loss_channel(rho, e1), e2);
      CHECK(max_abs_diff(twice.matrix(), loss_channel(rho, e1 * e2).matrix()) < 1e-9);
      CHECK(is_physical(twice));
    }
  }
  CHECK_THROWS_AS(loss_channel(one, 1.2), InvalidArgument);
  CHECK_THROWS_AS(loss_channel(one, -0.1), InvalidArgument);
}

TEST_CASE("mix") {
  std::mt19937_64 rng(29);
  const auto a = random_state(rng, 5);
  const auto b = random_state(rng, 5);
  CHECK(max_abs_diff(mix(a, b, 1.0).matrix(), a.matrix()) == 0.0);
  CHECK(max_abs_diff(mix(a, a, 0.5).matrix(), a.matrix()) < 1e-15);
  const auto m = mix(DensityMatrix::fock(1, 4), DensityMatrix::vacuum(4), 0.96);
  CHECK(std::abs(m(0, 0).real() - 0.04) < 1e-15);
  CHECK(std::abs(m(1, 1).real() - 0.96) < 1e-15);
  CHECK(std::abs(m(2, 2)) == 0.0);
  CHECK_THROWS_AS(mix(a, DensityMatrix::vacuum(4), 0.5), InvalidArgument);
  CHECK_THROWS_AS(mix(a, b, 1.5), InvalidArgument);
}

TEST_CASE("fidelity") {
  std::mt19937_64 rng(31);
  const auto rho = random_state(rng, 6);
  CHECK(std::abs(fidelity(rho, rho) - 1.0) < 1e-9);
  CHECK(fidelity(DensityMatrix::vacuum(5), DensityMatrix::fock(1, 5)) < 1e-12);
  const auto coh = DensityMatrix::pure(coherent_state(1.0, 20).state.amplitudes());
  CHECK(std::abs(fidelity(DensityMatrix::vacuum(20), coh) - std::exp(-1.0)) < 1e-6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_state(rng, 7);
    const auto b = random_state(rng, 7);
    const double fab = fidelity(a, b);
    CHECK(std::abs(fab - fidelity(b, a)) < 1e-9);
    CHECK(fab >= 0.0);
    CHECK(fab <= 1.0);
  }
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(fidelity(DensityMatrix(bad), DensityMatrix::vacuum(2)), InvalidArgument);
  CHECK_THROWS_AS(fidelity(DensityMatrix::vacuum(2), DensityMatrix::vacuum(3)), InvalidArgument);
}

TEST_CASE("Gaussian unitaries") {
  SUBCASE("displaced vacuum is coherent") {
    const Complex beta(0.7, -0.4);
    const auto displaced = displace(DensityMatrix::vacuum(20), beta);
    const auto coh = DensityMatrix::pure(coherent_state(beta, 20).state.amplitudes());
    CHECK(max_abs_diff(displaced.matrix(), coh.matrix()) < 1e-10);
  }
  SUBCASE("rotation turns the coherent amplitude") {
    const auto coh = DensityMatrix::pure(coherent_state(0.8, 20).state.amplitudes());
    const auto turned = rotate(coh, 0.5);
    const auto expected = DensityMatrix::pure(coherent_state(std::polar(0.8, 0.5), 20).state.amplitudes());
    CHECK(max_abs_diff(turned.matrix(), expected.matrix()) < 1e-12);
  }
  SUBCASE("channels keep states physical") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_state(rng, 30, 5, 3);
      CHECK(is_physical(displace(rho, Complex(0.3, 0.2)), 1e-9));
      CHECK(is_physical(rotate(rho, 1.1)));
      CHECK(is_physical(apply_unitary(squeeze_operator(0.2, 30), rho), 1e-9));
    }
  }
}
