#pragma once

#include "locuskit/attractor.hpp"
#include "locuskit/corner_analysis.hpp"
#include "locuskit/errors.hpp"
#include "locuskit/io.hpp"
#include "locuskit/locus_membership.hpp"
#include "locuskit/parallel.hpp"
#include "locuskit/series_core.hpp"
#include "locuskit/star_functions.hpp"
