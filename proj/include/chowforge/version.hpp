#pragma once

#define CHOWFORGE_VERSION "0.1.0"
