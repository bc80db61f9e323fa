#include "bloch/core.hpp"

#include <cmath>
#include <sstream>

namespace bloch {

BlochVector bloch_from_density(const DensityMatrix& rho, double slack) {
    if (std::abs(rho.trace() - 1.0) > slack) {
        std::ostringstream msg;
        msg << "bloch_from_density: trace " << rho.trace() << " != 1";
        throw InvalidDensityError(msg.str());
    }
    if (rho.rho11 < -slack || rho.rho11 > 1.0 + slack || rho.rho22 < -slack ||
        rho.rho22 > 1.0 + slack) {
        throw InvalidDensityError(
            "bloch_from_density: populations outside [0, 1]");
    }
    if (std::norm(rho.rho12) > rho.rho11 * rho.rho22 + slack) {
        throw InvalidDensityError(
            "bloch_from_density: |rho12|^2 > rho11*rho22, matrix not positive "
            "semidefinite");
    }
    return {2.0 * rho.rho12.imag(), 2.0 * rho.rho12.real(),
            rho.rho11 - rho.rho22};
}

DensityMatrix density_from_bloch(const BlochVector& r, double slack) {
    if (r.norm() > 1.0 + slack) {
        std::ostringstream msg;
        msg << "density_from_bloch: |R| = " << r.norm() << " exceeds 1";
        throw UnphysicalStateError(msg.str());
    }
    DensityMatrix rho;
    rho.rho11 = 0.5 * (1.0 + r.r3);
    rho.rho22 = 0.5 * (1.0 - r.r3);
    rho.rho12 = {0.5 * r.r2, 0.5 * r.r1};
    return rho;
}

double thermal_population_difference(double x) {
    if (!(x >= 0.0)) {
        throw std::domain_error(
            "thermal_population_difference: x must be >= 0 (equilibrium "
            "population inversion is out of scope)");
    }
    // (1 - e^-x)/(1 + e^-x) = tanh(x/2); tanh handles x = +inf exactly.
    return std::tanh(0.5 * x);
}

ThermalParams ThermalParams::from_temperature_ratio(double x) {
    return ThermalParams(thermal_population_difference(x));
}

double purity(const BlochVector& r) { return 0.5 + 0.5 * r.norm_sq(); }

double interference(const BlochVector& r) {
    return 0.25 * (r.r1 * r.r1 + r.r2 * r.r2);
}

PhysicalityReport validate_physicality(double t1, double t2, double r3_tilde) {
    PhysicalityReport report;
    if (!(t1 > 0.0) || !(t2 > 0.0)) {
        report.rates_positive = false;
        std::ostringstream msg;
        msg << "relaxation times must be positive (T1=" << t1 << ", T2=" << t2
            << ")";
        report.violations.push_back(msg.str());
    }
    if (!(r3_tilde >= 0.0 && r3_tilde <= 1.0)) {
        report.thermal_in_range = false;
        std::ostringstream msg;
        msg << "R3_tilde = " << r3_tilde << " outside [0, 1]";
        report.violations.push_back(msg.str());
    }
    if (report.rates_positive && !(2.0 * t1 >= t2)) {
        report.positivity_condition = false;
        std::ostringstream msg;
        msg << "2*T1 >= T2 violated (T1=" << t1 << ", T2=" << t2
            << "): dynamics is not completely positive";
        report.violations.push_back(msg.str());
    }
    return report;
}

PhysicalityReport validate_physicality(const SystemParams& p) {
    return validate_physicality(p.t1(), p.t2(), p.r3_tilde());
}

}  // namespace bloch
