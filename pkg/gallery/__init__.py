# Init file for gallery package
