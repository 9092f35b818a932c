#pragma once

#include <utility>
#include <vector>

#include "hyperlc/field.hpp"

namespace hlc {

/// Fixed even C-infinity cutoff: 1 on [-1,1], supported in [-2,2], values in
/// [0,1], built from the exp(-1/s) ramp.
double radial_cutoff(double r);

/// Annulus profile of the dyadic shell k: radial_cutoff(r/2^k) - radial_cutoff(r/2^(k-1)).
double shell_profile(double r, int k);

/// Dyadic frequency shell projection P_k (multiplier shell_profile(|xi|, k)).
/// The mean mode is annihilated for every k.
SpectralField shell_project(const SpectralField& f, int k);

/// Low-pass P_{<=k} (multiplier radial_cutoff(|xi|/2^k), passing the mean)
/// and its complement P_{>k}.
SpectralField shell_project_leq(const SpectralField& f, int k);
SpectralField shell_project_gt(const SpectralField& f, int k);

/// Shell indices with nonzero action on the grid: [k_lo, k_hi] such that
/// summing P_k over that range reconstructs f minus its mean.
std::pair<int, int> resolved_shell_range(const Grid3& g);

/// Smallest j for which the radius-2^j cutoff is identically 1 on the whole
/// (origin-centered) box, i.e. the top of the resolvable spatial range.
int spatial_scale_limit(const Grid3& g);

/// Physical-space localization of a frequency shell: multiply P_k f by a
/// cutoff of radius about 2^j centered at the origin.  The index set requires
/// j >= 0 and k + j >= 0; the three-case profile is
///   radial_cutoff(|x|/2^(-k))            if k + j = 0 and k <= 0,
///   radial_cutoff(|x|)                   if j = 0 and k >= 0,
///   shell_profile(|x|, j)                if k + j >= 1 and j >= 1.
/// Summing over j in [max(-k,0), spatial_scale_limit] recovers P_k f.
SpectralField localized_shell_project(const SpectralField& f, int j, int k);

}  // namespace hlc
