#pragma once
#ifndef GROWTH_HPP
#define GROWTH_HPP

#include "growth/error.hpp"
#include "growth/timeseries.hpp"
#include "growth/lsq.hpp"
#include "growth/rates.hpp"
#include "growth/models.hpp"
#include "growth/fitting.hpp"
#include "growth/forecast.hpp"
#include "growth/diagnostics.hpp"
#include "growth/io.hpp"
#include "growth/cases.hpp"

#endif  // GROWTH_HPP
