#include "qraft/fitting.hpp"
