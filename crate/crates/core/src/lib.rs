pub mod geom;
pub mod interval;
pub mod polygon;
pub mod arrangement;
pub mod visibility;
pub mod decomposition;
pub mod oracle;
pub mod normality;
pub mod fixtures;
pub mod gallery_file;
pub mod svg;
