#pragma once

// Core engine without the HTTP and CLI front ends.
#include "matsel/bayes.hpp"
#include "matsel/csv.hpp"
#include "matsel/error.hpp"
#include "matsel/model_io.hpp"
#include "matsel/pipeline.hpp"
#include "matsel/record.hpp"
#include "matsel/report.hpp"
#include "matsel/schema.hpp"
#include "matsel/similarity.hpp"
