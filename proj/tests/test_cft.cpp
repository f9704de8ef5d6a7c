#include "sdm/cft.hpp"
#include "sdm/free_fermion.hpp"

#include <doctest.h>

#include <cmath>

using namespace sdm;

TEST_CASE("theta constants against frozen references") {
    // q = e^{-pi}  (tau = i/2)
    const Complex q = std::exp(Complex(-kPi, 0.0));
    CHECK(std::abs(theta2(q) - Complex(0.913579138156116799)) < 1e-13);
    CHECK(std::abs(theta3(q) - Complex(1.08643481121330798)) < 1e-13);
    CHECK(std::abs(theta4(q) - Complex(0.913579138156116799)) < 1e-13);
    // real and complex nomes
    CHECK(std::abs(theta2(Complex(0.1)) - Complex(1.13593060156828018)) < 1e-13);
    CHECK(std::abs(theta3(Complex(0.1)) - Complex(1.2002000020000001)) < 1e-13);
    CHECK(std::abs(theta4(Complex(0.1)) - Complex(0.80019999800000019)) < 1e-13);
    CHECK(std::abs(theta2(Complex(0.05, 0.02)) -
                   Complex(0.960926429690248884, 0.0936220560966877363)) < 1e-13);
    CHECK(std::abs(theta3(Complex(0.05, 0.02)) -
                   Complex(1.1000008199926854, 0.0400167999978731231)) < 1e-13);
    CHECK(std::abs(theta4(Complex(0.05, 0.02)) -
                   Complex(0.900000820007314739, -0.0399831999978731215)) < 1e-13);
}

TEST_CASE("dedekind eta against frozen references") {
    CHECK(std::abs(dedekind_eta(Complex(0, 0.7)) - Complex(0.822186447762493389)) < 1e-14);
    CHECK(std::abs(dedekind_eta(Complex(0.1, 0.8)) -
                   Complex(0.806528976051379853, 0.017957475120636137)) < 1e-14);
    CHECK(std::abs(dedekind_eta(Complex(0, 0.5)) - Complex(0.837755763476598081)) < 1e-14);
}

TEST_CASE("elliptic K: closed form at 0, reference values, complex arguments") {
    CHECK(std::abs(elliptic_K(Complex(0.0)) - Complex(kPi / 2)) < 1e-14);
    CHECK(std::abs(elliptic_K(Complex(0.5)) - Complex(1.85407467730137188)) < 1e-13);
    CHECK(std::abs(elliptic_K(Complex(0.3)) - Complex(1.71388944817879096)) < 1e-13);
    CHECK(std::abs(elliptic_K(Complex(-0.5, 1e-6)) -
                   Complex(1.4157372084258617, 2.47889691296033431e-07)) < 1e-12);
    CHECK(std::abs(elliptic_K(Complex(1.3, -1e-6)) -
                   Complex(1.92292115780026318, -1.46948996974881441)) < 1e-12);
    CHECK(std::abs(elliptic_K(Complex(0.9, 0.1)) -
                   Complex(2.40914892923201895, 0.364733507591536277)) < 1e-12);
}

TEST_CASE("App H identities on a grid of moduli") {
    for (Complex tau : {Complex(0, 0.5), Complex(0, 0.7), Complex(0.08, 0.9), Complex(-0.05, 0.6)}) {
        const Complex q = std::exp(Complex(0, 2 * kPi) * tau);
        const Complex t2 = theta2_tau(tau), t3 = theta3_tau(tau), t4 = theta4_tau(tau);
        const Complex lhs = t3 * t3 * t3 * t3 - t2 * t2 * t2 * t2 - t4 * t4 * t4 * t4;
        CHECK(std::abs(lhs) < 1e-12);
        const Complex eta3 = dedekind_eta(2.0 * tau);
        CHECK(std::abs(2.0 * eta3 * eta3 * eta3 - t2 * t3 * t4) < 1e-12);
        (void)q;
    }
}

TEST_CASE("tau(x = 1/2) = i/2 and x <-> tau round trips") {
    CHECK(std::abs(tau_from_x(Complex(0.5)) - Complex(0, 0.5)) < 1e-12);
    for (Complex x : {Complex(0.3), Complex(0.7, 0.01), Complex(0.12, -0.004)}) {
        CHECK(std::abs(x_from_tau(tau_from_x(x)) - x) < 1e-10);
        CHECK(std::abs(xbar_from_taubar(taubar_from_xbar(x)) - x) < 1e-10);
    }
    // continued x slightly below zero keeps the continuation domain
    const Complex xneg(-0.2, 1e-8);
    const Complex tau = tau_from_x(xneg);
    CHECK(tau.imag() > 0.0);
    CHECK(std::abs(x_from_tau(tau) - xneg) < 1e-9);
}

TEST_CASE("cross ratio: equal-time symmetric case is real in (0,1)") {
    const auto k = CftKinematics::intervals(0, 10, 14, 24, 0.0);
    const auto [x, xb] = cross_ratio(k);
    CHECK(std::abs(x.imag()) < 1e-7);
    CHECK(x.real() > 0.0);
    CHECK(x.real() < 1.0);
    CHECK(std::abs(x - xb) < 1e-7);
    // touching endpoints drive x -> 0; widely separated intervals drive x -> 1
    const auto knull = CftKinematics::intervals(0, 10, 10.05, 24, 0.0);
    const auto [xn, xbn] = cross_ratio(knull);
    CHECK(std::abs(xn) < 0.01);
    (void)xbn;
    const auto kfar = CftKinematics::intervals(0, 10, 600, 610, 0.0);
    CHECK(std::abs(cross_ratio(kfar).first - Complex(1.0)) < 0.01);
    // coincident equal-time intervals: the iε offsets keep the denominator
    // finite but the cross-ratio blows up ~ L^2/eps^2
    const auto kdeg = CftKinematics::intervals(0, 10, 0, 10, 0.0);
    CHECK(std::abs(cross_ratio(kdeg).first) > 1e6);
}

TEST_CASE("stacked-interval cross-ratio equals 1 - L^2/t^2") {
    // stacked intervals continued in t: x from the light-cone coordinates
    const double l = 40.0, t = 25.0;
    const auto k = CftKinematics::intervals(0, l, 0, l, t);
    const auto [x, xb] = cross_ratio(k);
    CHECK(std::abs(x.real() - (1.0 - l * l / (t * t))) < 1e-6);
    CHECK(std::abs(xb.real() - (1.0 - l * l / (t * t))) < 1e-6);
}

TEST_CASE("keystone: torus formula with the free-fermion Z2 equals the Tsallis form") {
    // equal-time and a timelike path, several kinematics; relative 1e-9
    for (double dt : {0.0, 5.0, 12.0, 30.0, 45.0}) {
        const auto k = CftKinematics::intervals(0, 50, 70, 120, dt);
        const Complex via_torus = tr_T2_torus(k, z2_free_fermion);
        const Complex via_tsallis = ff_tsallis_two_intervals(k, 2);
        CHECK(std::abs(via_torus - via_tsallis) <= 1e-9 * std::abs(via_tsallis));
    }
}

TEST_CASE("ordering-eps independence (Richardson step)") {
    const auto k1 = CftKinematics::intervals(0, 50, 70, 120, 30.0);
    const auto k2 = CftKinematics::intervals(0, 50, 70, 120, 30.0, 1.0, 1.0,
                                             0.5 * CftKinematics::intervals(0, 50, 70, 120, 30.0).ordering_eps);
    const Complex a = ff_tsallis_two_intervals(k1, 2);
    const Complex b = ff_tsallis_two_intervals(k2, 2);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
}

TEST_CASE("ff tsallis: equal-time values real in (0,1], far separation factorizes") {
    // widely separated intervals: x -> 1 and Tr rho^2 approaches the product
    // of single-interval purities (everything inside the fixed cutoff eps=1)
    const auto kfar = CftKinematics::intervals(0, 10, 500, 510, 0.0);
    const Complex v = ff_tsallis_two_intervals(kfar, 2);
    CHECK(std::abs(v.imag()) < 1e-8);
    CHECK(v.real() > 0.0);
    CHECK(v.real() <= 1.0);
    // product of single purities: (eps^2/(l1 l2))^{1/4} at n=2, c=1
    const double product = std::pow(1.0 / (10.0 * 10.0), 0.25);
    CHECK(std::abs(v.real() - product) / product < 0.01);
    // n = 3 equal-time also real positive <= 1
    const Complex v3 = ff_tsallis_two_intervals(kfar, 3);
    CHECK(std::abs(v3.imag()) < 1e-8);
    CHECK(v3.real() > 0.0);
    CHECK(v3.real() <= 1.0);
}

TEST_CASE("modular S invariance of the free-fermion Z2 within the continuation domain") {
    for (double dt : {0.0, 10.0, 30.0}) {
        const auto k = CftKinematics::intervals(0, 50, 70, 120, dt);
        const TorusModulus m = modulus_pair(k);
        const TorusModulus s_transformed = modular_S(m);
        CHECK(m.tau.imag() > 0.0);
        CHECK(m.tau_bar.imag() < 0.0);
        const Complex z = z2_free_fermion(m);
        const Complex zs = z2_free_fermion(s_transformed);
        CHECK(std::abs(z - zs) <= 1e-9 * std::abs(z));
    }
}

TEST_CASE("holographic selector: values, crossover at sqrt(2) L") {
    const double l = 3.0, c = 1.0, eps = 0.01;
    // spacelike: connected surface dominates with (2c/3) log(sqrt(L^2-dt^2)/eps)
    const auto s0 = holographic_two_interval(l, 0.0, c, eps);
    CHECK(s0.connected_selected);
    CHECK(std::abs(s0.connected.real() - (2 * c / 3) * std::log(l / eps)) < 1e-12);
    // dt = 1.5 L > sqrt(2) L: disconnected
    const auto s2 = holographic_two_interval(l, 1.5 * l, c, eps);
    CHECK_FALSE(s2.connected_selected);
    // just below the crossover: connected, real part as stated
    const double dtb = std::sqrt(2.0) * l * 0.999;
    const auto s1 = holographic_two_interval(l, dtb, c, eps);
    CHECK(s1.connected_selected);
    CHECK(std::abs(s1.connected.real() -
                   (2 * c / 3) * 0.5 * std::log(std::abs(l * l - dtb * dtb) / (eps * eps))) < 1e-12);

    // bisection localizes the switch at sqrt(2) L to 1e-9 L
    double lo = 1.0 * l, hi = 2.0 * l;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (holographic_two_interval(l, mid, c, eps).connected_selected)
            lo = mid;
        else
            hi = mid;
    }
    CHECK(std::abs(0.5 * (lo + hi) - std::sqrt(2.0) * l) < 1e-9 * l);
}
