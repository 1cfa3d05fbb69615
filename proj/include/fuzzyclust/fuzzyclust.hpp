#pragma once

#include "fuzzyclust/cli.hpp"
#include "fuzzyclust/dataset.hpp"
#include "fuzzyclust/errors.hpp"
#include "fuzzyclust/fuzzy.hpp"
#include "fuzzyclust/kmeans.hpp"
#include "fuzzyclust/report.hpp"
