#pragma once

#include <carpetq/asymptotics.hpp>
#include <carpetq/distortion.hpp>
#include <carpetq/geometry.hpp>
#include <carpetq/io.hpp>
#include <carpetq/measure.hpp>
#include <carpetq/optimal.hpp>
#include <carpetq/oracle.hpp>
#include <carpetq/rational.hpp>
#include <carpetq/render.hpp>
