#pragma once

#include "spix/algorithms/segment.hpp"
#include "spix/color.hpp"
#include "spix/connectivity.hpp"
#include "spix/csv.hpp"
#include "spix/dataset.hpp"
#include "spix/image.hpp"
#include "spix/label_codec.hpp"
#include "spix/manifest.hpp"
#include "spix/metrics.hpp"
#include "spix/optimization.hpp"
#include "spix/pipeline.hpp"
#include "spix/png_io.hpp"
#include "spix/robustness.hpp"
#include "spix/summary.hpp"
#include "spix/synthetic.hpp"
#include "spix/version.hpp"
