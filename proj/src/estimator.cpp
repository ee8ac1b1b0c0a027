#include "qraft/estimator.hpp"
