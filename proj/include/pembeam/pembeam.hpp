#pragma once

#include "pembeam/beam.hpp"
#include "pembeam/circuit.hpp"
#include "pembeam/config.hpp"
#include "pembeam/coupled.hpp"
#include "pembeam/dataset.hpp"
#include "pembeam/errors.hpp"
#include "pembeam/frequency_response.hpp"
#include "pembeam/io.hpp"
#include "pembeam/modal.hpp"
#include "pembeam/network.hpp"
#include "pembeam/numeric.hpp"
#include "pembeam/optimizer.hpp"
#include "pembeam/reduced.hpp"
#include "pembeam/verify.hpp"
#include "pembeam/version.hpp"
