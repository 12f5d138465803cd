#pragma once

// Gaussian center-of-mass wave packets in momentum representation,
//   <p|psi_0> ~ exp(-(p-p0)^2/(2 sigma_p^2) - i p z0)   (hbar = 1),
// i.e. a minimum-uncertainty packet centered at position z0 > 0 moving with
// momentum p0. sigma here is the POSITION-space width parameter; the
// momentum-space std dev is hbar*sigma.

#include <cmath>
#include <stdexcept>

namespace spdiff {

struct GaussianWavePacket {
    double sigma_e, sigma_g;  // width parameters (momentum widths hbar*sigma)
    double p_e, p_g;          // momentum expectation values
    double z_e, z_g;          // mean positions

    double dz()   const { return z_e - z_g; }
    double zbar() const { return 0.5 * (z_e + z_g); }

    void validate() const {
        if (sigma_e <= 0.0 || sigma_g <= 0.0)
            throw std::invalid_argument("GaussianWavePacket: widths must be positive");
    }
};

} // namespace spdiff
