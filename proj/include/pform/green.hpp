#pragma once

#include "pform/evolve.hpp"

namespace pform {

enum class Direction { retarded, advanced };

/// Causal inverse of box. Retarded: zero data on slice 0, march forward.
/// Advanced: zero data on slice K, march backward.
class GreensOperator {
 public:
  explicit GreensOperator(Direction dir) : dir_(dir) {}
  Direction direction() const { return dir_; }
  SpacetimeForm apply(const Current& f) const;

 private:
  Direction dir_;
};

SpacetimeForm apply_retarded(const Current& f);
SpacetimeForm apply_advanced(const Current& f);

/// E f = E^- f - E^+ f (advanced minus retarded).
SpacetimeForm causal_propagator(const Current& f);

enum class CommuteOp { d, delta };

/// |op(G f) - G(op f)| / |G f| over slices 0..K.
double commutation_check(const Current& f, CommuteOp op, Direction dir);

/// <A, f> against the six-term expression from A's traces on slice m, the
/// source J and the Green's solutions of f. J is paired with the advanced
/// solution on slices >= m and with the retarded one on slices <= m.
IdentityCheck representation_check(const SpacetimeForm& A, const Current& J, const Current& f,
                                   int m);

}  // namespace pform
