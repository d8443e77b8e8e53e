#pragma once

#include "sumdens/axioms.hpp"
#include "sumdens/bitmap.hpp"
#include "sumdens/cover_oracle.hpp"
#include "sumdens/density.hpp"
#include "sumdens/errors.hpp"
#include "sumdens/number_theory.hpp"
#include "sumdens/periodic_io.hpp"
#include "sumdens/periodic_set.hpp"
#include "sumdens/rational.hpp"
#include "sumdens/residue_set.hpp"
#include "sumdens/tower.hpp"
#include "sumdens/tower_json.hpp"
#include "sumdens/verify.hpp"
