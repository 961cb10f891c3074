#pragma once

// Umbrella header for the claimforge engine.

#include "claimforge/bench.hpp"
#include "claimforge/config.hpp"
#include "claimforge/core.hpp"
#include "claimforge/corpus.hpp"
#include "claimforge/csv.hpp"
#include "claimforge/date.hpp"
#include "claimforge/error.hpp"
#include "claimforge/market.hpp"
#include "claimforge/pipeline.hpp"
#include "claimforge/rng.hpp"
#include "claimforge/sentiment.hpp"
#include "claimforge/stats.hpp"
#include "claimforge/text.hpp"
#include "claimforge/textproc.hpp"
#include "claimforge/weaklabel.hpp"
