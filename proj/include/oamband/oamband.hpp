#pragma once

#include "oamband/errors.hpp"
#include "oamband/geometric.hpp"
#include "oamband/metrics.hpp"
#include "oamband/optimizer.hpp"
#include "oamband/overlap_oracle.hpp"
#include "oamband/parallel.hpp"
#include "oamband/params.hpp"
#include "oamband/quadrature.hpp"
#include "oamband/report.hpp"
#include "oamband/special_fn.hpp"
#include "oamband/spectrum.hpp"
