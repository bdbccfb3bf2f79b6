#pragma once

#include <Eigen/Dense>

#include "clipcs/fourier.hpp"

namespace clipcs {

enum class Basis { kTime, kFrequency };

/// A length-N complex vector tagged with the basis it lives in, so time and
/// frequency blocks cannot be mixed up silently.
struct ComplexBlock {
    Eigen::VectorXcd values;
    Basis basis = Basis::kTime;

    ComplexBlock to_time() const {
        if (basis == Basis::kTime) return *this;
        return {fourier::idft(values), Basis::kTime};
    }

    ComplexBlock to_frequency() const {
        if (basis == Basis::kFrequency) return *this;
        return {fourier::dft(values), Basis::kFrequency};
    }
};

} // namespace clipcs
