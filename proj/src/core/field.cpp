#include "pairscatter/field.hpp"

#include "pairscatter/kernels.hpp"

namespace pairscatter {

double ComplexField::norm2() const {
  double cell = grid_.dx();
  if (grid_.dim() == 2) cell *= grid_.dx();
  return kernels::sum_abs2(values_) * cell;
}

}  // namespace pairscatter
