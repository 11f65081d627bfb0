// Fitted parameter sets used as regression anchors throughout the tests:
// three mGB rows and three GB2 rows (house prices, 2019 index cross-section,
// and the 2000-2022 pooled index).
#pragma once

#include "gbtail/distributions.hpp"

namespace anchors {

inline gbtail::GBParams mgb_hp() {
  return {2.3717, 4209.7557, 187.7393, 0.8597, 0.3891};
}
inline gbtail::GBParams mgb_hpi_2019() {
  return {2.2532, 914.3328, 54.0456, 71.5687, 1.7586};
}
inline gbtail::GBParams mgb_hpi_pooled() {
  return {3.3038, 1342.3155, 163.8916, 3.6162, 1.0004};
}

inline gbtail::GB2Params gb2_hp() {
  return {2.8732, 178.0461, 0.6692, 1.0289};
}
inline gbtail::GB2Params gb2_hpi_2019() {
  return {1.6063, 58.029, 52.5168, 5.6728};
}
inline gbtail::GB2Params gb2_hpi_pooled() {
  return {2.1786, 42.1151, 75.7226, 2.8667};
}

}  // namespace anchors
