#pragma once

#include "riesz/cone.hpp"
#include "riesz/distributions.hpp"
#include "riesz/errors.hpp"
#include "riesz/ingest.hpp"
#include "riesz/io.hpp"
#include "riesz/report.hpp"
#include "riesz/rng.hpp"
#include "riesz/sampler.hpp"
#include "riesz/stats.hpp"
#include "riesz/sym_matrix.hpp"
#include "riesz/verify.hpp"
