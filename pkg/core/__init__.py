# Init file for core package
