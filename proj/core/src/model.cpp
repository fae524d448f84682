#include "wavekin/model.hpp"

#include <stdexcept>

namespace wavekin {

void Model::validate() const {
  torus.validate();
  law.validate();
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("dissipation exponent r must lie in (0, 1]");
  if (law.L != torus.L) throw std::invalid_argument("scaling law and torus disagree on L");
}

ModeData::ModeData(const Model& m)
    : lattice((m.validate(), m.torus)),
      gamma(lattice.gammas(m.r)),
      c(sample_on_lattice(m.c, lattice)),
      b(sample_on_lattice(m.b, lattice)),
      vartheta(m.law.vartheta()),
      forcing(m.law.forcing_rate()) {}

}  // namespace wavekin
