#pragma once

#include "graphheat/errors.hpp"
#include "graphheat/fdm.hpp"
#include "graphheat/graph.hpp"
#include "graphheat/heat.hpp"
#include "graphheat/io.hpp"
#include "graphheat/laplace_galerkin.hpp"
#include "graphheat/laplacian.hpp"
#include "graphheat/local_laplacian.hpp"
#include "graphheat/numkernel.hpp"
#include "graphheat/skeleton.hpp"
#include "graphheat/spectral.hpp"
#include "graphheat/wavelet.hpp"
