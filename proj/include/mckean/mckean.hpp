#pragma once

#include "mckean/errors.hpp"
#include "mckean/spectral/field.hpp"
#include "mckean/spectral/grid.hpp"
#include "mckean/spectral/io.hpp"
#include "mckean/spectral/operators.hpp"
#include "mckean/besov/estimates.hpp"
#include "mckean/besov/littlewood_paley.hpp"
#include "mckean/besov/norms.hpp"
#include "mckean/drift/drift.hpp"
#include "mckean/drift/mollify.hpp"
#include "mckean/fp/gronwall.hpp"
#include "mckean/fp/mild.hpp"
#include "mckean/fp/mittag_leffler.hpp"
#include "mckean/fp/nonlinearity.hpp"
#include "mckean/fp/picard.hpp"
#include "mckean/fp/stability.hpp"
#include "mckean/fp/trajectory.hpp"
#include "mckean/fp/weak.hpp"
#include "mckean/particles/ensemble.hpp"
#include "mckean/particles/interpolate.hpp"
#include "mckean/particles/kde.hpp"
#include "mckean/particles/kernel.hpp"
#include "mckean/particles/simulate.hpp"
