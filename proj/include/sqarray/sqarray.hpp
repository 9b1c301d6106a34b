#pragma once

#include "sqarray/error.hpp"
#include "sqarray/core.hpp"
#include "sqarray/metrics.hpp"
#include "sqarray/parallel.hpp"
#include "sqarray/cyclic.hpp"
#include "sqarray/randgroup.hpp"
#include "sqarray/spacefill.hpp"
#include "sqarray/io.hpp"
#include "sqarray/catalog.hpp"
