#pragma once

#include "imvc/errors.hpp"
#include "imvc/numkit/matrix.hpp"
#include "imvc/numkit/tape.hpp"
#include "imvc/numkit/ops.hpp"
#include "imvc/numkit/adam.hpp"
#include "imvc/datakit/dataset.hpp"
#include "imvc/datakit/io.hpp"
#include "imvc/graphkit/graph.hpp"
#include "imvc/model/params.hpp"
#include "imvc/model/forward.hpp"
#include "imvc/model/checkpoint.hpp"
#include "imvc/losses/losses.hpp"
#include "imvc/metrics/metrics.hpp"
#include "imvc/metrics/kmeans.hpp"
#include "imvc/trainer/config.hpp"
#include "imvc/trainer/train.hpp"
#include "imvc/trainer/report.hpp"
