#pragma once

// The complete Gaussian Volterra short-rate model
//
//   r_t = theta(t) + int_0^t phi(t-u) dW_u
//
// bundled as drift curve + convolution kernel + driver.

#include "volrate/curves.hpp"
#include "volrate/driver.hpp"
#include "volrate/kernel.hpp"

namespace volrate {

struct RateModel {
    ThetaCurve theta;
    KernelSpec kernel;
    DriverSpec driver;
};

/// The Vasicek model as a Gaussian Volterra special case: exponential kernel
/// phi = sigma e^{-kappa x} with the Vasicek theta curve and Brownian driver.
inline RateModel vasicek_model(double r0, double kappa, double mu, double sigma) {
    return RateModel{ThetaCurve::vasicek(r0, kappa, mu),
                     KernelSpec::exponential(kappa, sigma), DriverSpec::brownian()};
}

}  // namespace volrate
