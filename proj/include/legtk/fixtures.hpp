// Analytic test scenes: discs, annuli, and multi-island sets with bridges.
#pragma once

#include "legtk/geometry.hpp"

namespace legtk {
namespace fixtures {

AdmissibleSet disc();
AdmissibleSet annulus();        // 0.5 <= |z| <= 2
AdmissibleSet pair_of_pants();  // one island, two holes
AdmissibleSet two_islands_three_bridges();
AdmissibleSet three_island_chain();  // chain bridges plus one long cycle-closing arc
AdmissibleSet free_circle();         // single closed free curve (unit circle)

}  // namespace fixtures
}  // namespace legtk
