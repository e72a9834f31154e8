#pragma once

#include <string>
#include <utility>

#include "pform/green.hpp"

namespace pform {

struct LorenzDataCheck {
  bool ok = false;
  double delta_Ad = 0.0;  // |delta Ad - rho_n J|
  double delta_An = 0.0;
  double Adelta = 0.0;
};

/// Slice conditions under which the evolved field stays in Lorenz gauge.
/// rho_n J defaults to zero (free field).
LorenzDataCheck is_lorenz_data(const Slice& s, const CauchyData& data,
                               const Cochain* rho_n_source = nullptr);

/// Max over slices of |delta A| (absolute).
double lorenz_residual(const SpacetimeForm& A);

/// Evolves the data and reports lorenz_residual of the result.
double lorenz_equivalence_check(const CauchyData& data, const SpacetimePtr& st);

/// max over slices |-delta d A - J| / max(|A|, |J|, 1e-12).
double maxwell_residual(const SpacetimeForm& A, const Current* J = nullptr);

/// Lorenz evolution of (A0, Ad, An, 0) from slice 0. Ad must be co-closed;
/// An, when given, must be co-closed too.
SpacetimeForm solve_maxwell_homogeneous(const Cochain& A0, const Cochain& Ad,
                                        const SpacetimePtr& st, const Cochain* An = nullptr);

/// Lorenz solution of -delta d A = J from (A0, omega, 0, 0) on slice m, where
/// delta omega = rho_n J on that slice.
SpacetimeForm solve_maxwell_inhomogeneous(const Cochain& A0, const Current& J,
                                          const SpacetimePtr& st, int m = 0);

/// A + d Lambda.
SpacetimeForm gauge_transform(const SpacetimeForm& A, const SpacetimeForm& Lambda);

struct GaugeEquivalence {
  bool equivalent = false;
  double momentum_diff = 0.0;  // |rho_d A - rho_d A'| / scale
  double class_diff = 0.0;     // non-exact part of rho_0 A - rho_0 A', / scale
};

/// Decides A ~ A' from ([rho_0], rho_d) on slice k. Both must solve the
/// Maxwell equation with source J (or none) to 1e-6.
GaugeEquivalence is_gauge_equivalent(const SpacetimeForm& A, const SpacetimeForm& B, int k,
                                     const Current* J = nullptr);

/// Lorenz data -> Coulomb data (A0, Ad, 0, 0) and a free Lambda with
/// rho_d Lambda = -An, so that the Coulomb evolution equals A + d Lambda.
std::pair<CauchyData, SpacetimeForm> make_coulomb(const CauchyData& data,
                                                  const SpacetimePtr& st);

struct FundamentalCheck {
  double residual = 0.0;
  bool applicable = true;  // false when J is not co-closed
};

/// |-delta d (G J) - J| / |J| for the retarded or advanced solution.
FundamentalCheck fundamental_solution_check(const Current& J, Direction dir);

struct FieldCauchyResult {
  SpacetimeForm A;
  SpacetimeForm F;
  double dF = 0.0;
  double deltaF = 0.0;
  double rho0_match = 0.0;
  double rhon_match = 0.0;
  double rhod_vanish = 0.0;
  double rhodelta_vanish = 0.0;
};

/// Potential and field for closed F0 (exact) and co-closed Fn on slice 0.
FieldCauchyResult solve_F_cauchy(const Cochain& F0, const Cochain& Fn, const SpacetimePtr& st);

struct CauchyFile {
  ComplexPtr complex;
  CauchyData data;
  int slice = 0;
};

/// Writes <base>.csv (component,degree,cell,value) and <base>.json
/// (d, N, L, p, slice).
void export_cauchy(const CauchyData& data, int slice, const std::string& base);
CauchyFile import_cauchy(const std::string& base);

}  // namespace pform
