#include "qraft/report.hpp"
