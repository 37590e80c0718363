#pragma once

#include "smm/analysis.hpp"
#include "smm/belief.hpp"
#include "smm/discrepancy.hpp"
#include "smm/episode.hpp"
#include "smm/error.hpp"
#include "smm/io.hpp"
#include "smm/predictor.hpp"
#include "smm/report.hpp"
#include "smm/scenario.hpp"
#include "smm/scoring.hpp"
#include "smm/synth.hpp"
