// SPDX-License-Identifier: Apache-2.0
#ifndef QRW_QRW_HPP
#define QRW_QRW_HPP

#include "qrw/evolve.hpp"
#include "qrw/fourier.hpp"
#include "qrw/haar.hpp"
#include "qrw/histogram.hpp"
#include "qrw/io.hpp"
#include "qrw/localize.hpp"
#include "qrw/polytope.hpp"
#include "qrw/spectral.hpp"
#include "qrw/walk_spec.hpp"

#endif  // QRW_QRW_HPP
